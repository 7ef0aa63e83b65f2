// Scenario-runner CLI over the hyko C API.
//
// Exit codes: 0 success; 1 usage error; 2 configuration/validation error;
// 3 at least one enabled check failed; 4 runtime error.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hyko.h"

namespace {

int exit_code_for(hyko_status status) {
  switch (status) {
    case HYKO_OK: return 0;
    case HYKO_ERR_INVALID_ARGUMENT:
    case HYKO_ERR_PARSE:
    case HYKO_ERR_VALIDATION: return 2;
    case HYKO_ERR_CHECKS_FAILED: return 3;
    default: return 4;
  }
}

const char* code_name(hyko_status status) {
  switch (status) {
    case HYKO_OK: return "ok";
    case HYKO_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HYKO_ERR_PARSE: return "parse_error";
    case HYKO_ERR_VALIDATION: return "validation_error";
    case HYKO_ERR_NUMERICAL: return "numerical_error";
    case HYKO_ERR_UNSUPPORTED: return "unsupported";
    case HYKO_ERR_IO: return "io_error";
    case HYKO_ERR_CHECKS_FAILED: return "checks_failed";
  }
  return "unknown";
}

void print_error(hyko_status status) {
  std::fprintf(stderr, "{\"error\": {\"code\": \"%s\", \"message\": \"%s\"}}\n",
               code_name(status), hyko_last_error());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid quantum-classical phase-space simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checks;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run a scenario from a JSON configuration");
  run->add_option("--config", config_path, "path to the scenario configuration")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--checks", checks, "all | none | comma-separated suite names");
  run->add_flag("--quiet", quiet, "suppress per-check output");

  auto* presets = app.add_subcommand("presets", "list preset classical Hamiltonians");
  auto* schema = app.add_subcommand("schema", "print the configuration schema");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    hyko_status status =
        hyko_run_scenario_file(config_path.c_str(), out_dir.c_str(),
                               checks.empty() ? nullptr : checks.c_str(), quiet ? 1 : 0,
                               nullptr);
    if (status != HYKO_OK && status != HYKO_ERR_CHECKS_FAILED) print_error(status);
    if (status == HYKO_ERR_CHECKS_FAILED && !quiet)
      std::fprintf(stderr, "one or more enabled checks failed\n");
    return exit_code_for(status);
  }

  char* json = nullptr;
  hyko_status status =
      presets->parsed() ? hyko_presets_json(&json)
                        : (schema->parsed() ? hyko_schema_json(&json) : HYKO_OK);
  if (status != HYKO_OK) {
    print_error(status);
    return exit_code_for(status);
  }
  if (json) {
    std::fputs(json, stdout);
    std::fputc('\n', stdout);
    hyko_string_free(json);
  }
  return 0;
}
