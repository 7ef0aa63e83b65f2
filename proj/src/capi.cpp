#include "hyko.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "expr.hpp"
#include "grid.hpp"
#include "scenario.hpp"

#define HYKO_EXPORT __attribute__((visibility("default")))

namespace {

thread_local std::string g_last_error;

hyko_status status_of(const hyko::Error& e) {
  switch (e.code()) {
    case hyko::ErrorCode::invalid_argument: return HYKO_ERR_INVALID_ARGUMENT;
    case hyko::ErrorCode::parse: return HYKO_ERR_PARSE;
    case hyko::ErrorCode::validation: return HYKO_ERR_VALIDATION;
    case hyko::ErrorCode::numerical: return HYKO_ERR_NUMERICAL;
    case hyko::ErrorCode::unsupported: return HYKO_ERR_UNSUPPORTED;
    case hyko::ErrorCode::io: return HYKO_ERR_IO;
  }
  return HYKO_ERR_NUMERICAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
hyko_status guarded(F&& f) {
  try {
    return f();
  } catch (const hyko::Error& e) {
    g_last_error = e.what();
    if (!e.field().empty()) g_last_error += " (field: " + e.field() + ")";
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HYKO_ERR_NUMERICAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HYKO_ERR_NUMERICAL;
  }
}

hyko_status run_scenario_common(const hyko::Json& config, const char* out_dir,
                                const char* checks, int quiet, char** out_summary_json) {
  std::optional<std::string> override_arg;
  if (checks) override_arg = std::string(checks);
  auto result = hyko::run_scenario(config, override_arg);
  if (out_dir) hyko::write_scenario_outputs(result, out_dir);
  hyko::Json summary = hyko::render_checks_json(result);
  if (out_summary_json) *out_summary_json = dup_string(summary.dump(2));
  if (!quiet) {
    for (const auto& c : result.checks)
      std::fprintf(stdout, "[%s] check %s (worst=%g, tol=%g)%s\n",
                   c.passed ? "PASS" : "FAIL", c.name.c_str(), c.worst, c.tol,
                   c.applicable ? "" : " [not applicable]");
  }
  if (!result.checks_passed) {
    g_last_error = "one or more enabled checks failed";
    return HYKO_ERR_CHECKS_FAILED;
  }
  return HYKO_OK;
}

}  // namespace

struct hyko_grid {
  hyko::PhaseSpaceGrid grid;
};

extern "C" {

HYKO_EXPORT const char* hyko_version(void) { return "0.1.0"; }

HYKO_EXPORT const char* hyko_last_error(void) { return g_last_error.c_str(); }

HYKO_EXPORT void hyko_string_free(char* s) { std::free(s); }

HYKO_EXPORT hyko_status hyko_presets_json(char** out_json) {
  return guarded([&]() -> hyko_status {
    if (!out_json) {
      g_last_error = "out_json is null";
      return HYKO_ERR_INVALID_ARGUMENT;
    }
    *out_json = dup_string(hyko::list_presets().dump(2));
    return HYKO_OK;
  });
}

HYKO_EXPORT hyko_status hyko_schema_json(char** out_json) {
  return guarded([&]() -> hyko_status {
    if (!out_json) {
      g_last_error = "out_json is null";
      return HYKO_ERR_INVALID_ARGUMENT;
    }
    *out_json = dup_string(hyko::emit_schema().dump(2));
    return HYKO_OK;
  });
}

HYKO_EXPORT hyko_status hyko_run_scenario(const char* config_json, const char* out_dir,
                                          const char* checks, int quiet,
                                          char** out_summary_json) {
  return guarded([&]() -> hyko_status {
    if (!config_json) {
      g_last_error = "config_json is null";
      return HYKO_ERR_INVALID_ARGUMENT;
    }
    hyko::Json config = hyko::Json::parse(config_json, nullptr, false);
    if (config.is_discarded()) {
      g_last_error = "configuration is not valid JSON";
      return HYKO_ERR_PARSE;
    }
    return run_scenario_common(config, out_dir, checks, quiet, out_summary_json);
  });
}

HYKO_EXPORT hyko_status hyko_run_scenario_file(const char* config_path, const char* out_dir,
                                               const char* checks, int quiet,
                                               char** out_summary_json) {
  return guarded([&]() -> hyko_status {
    if (!config_path) {
      g_last_error = "config_path is null";
      return HYKO_ERR_INVALID_ARGUMENT;
    }
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      g_last_error = std::string("cannot open ") + config_path;
      return HYKO_ERR_IO;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    hyko::Json config = hyko::Json::parse(ss.str(), nullptr, false);
    if (config.is_discarded()) {
      g_last_error = std::string("configuration is not valid JSON: ") + config_path;
      return HYKO_ERR_PARSE;
    }
    return run_scenario_common(config, out_dir, checks, quiet, out_summary_json);
  });
}

HYKO_EXPORT hyko_status hyko_grid_create(double q_min, double q_max, double p_min,
                                         double p_max, int n_q, int n_p, int boundary,
                                         hyko_grid** out_grid) {
  return guarded([&]() -> hyko_status {
    if (!out_grid) {
      g_last_error = "out_grid is null";
      return HYKO_ERR_INVALID_ARGUMENT;
    }
    auto b = boundary == 0 ? hyko::Boundary::periodic : hyko::Boundary::zero;
    *out_grid = new hyko_grid{hyko::build_grid(q_min, q_max, p_min, p_max, n_q, n_p, b)};
    return HYKO_OK;
  });
}

HYKO_EXPORT void hyko_grid_destroy(hyko_grid* grid) { delete grid; }

HYKO_EXPORT int hyko_grid_num_points(const hyko_grid* grid) {
  return grid ? grid->grid.size() : 0;
}

HYKO_EXPORT double hyko_grid_cell_weight(const hyko_grid* grid) {
  return grid ? grid->grid.cell_weight() : 0.0;
}

HYKO_EXPORT hyko_status hyko_eval_expression(const char* text, const hyko_grid* grid,
                                             double* out_values) {
  return guarded([&]() -> hyko_status {
    if (!text || !grid || !out_values) {
      g_last_error = "null argument";
      return HYKO_ERR_INVALID_ARGUMENT;
    }
    auto values = hyko::expr::evaluate_on_grid(hyko::expr::parse(text), grid->grid);
    for (int i = 0; i < grid->grid.size(); ++i) out_values[i] = values(i);
    return HYKO_OK;
  });
}

}  // extern "C"
