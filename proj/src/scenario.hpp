#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "dynamics.hpp"

namespace hyko {

using Json = nlohmann::ordered_json;

// One row of the time-series output: observable expectations (real part and
// imaginary residual), the two entropies, quantum-marginal purity, and the
// state-invariant residuals.
struct TimeSeriesRow {
  double time = 0.0;
  std::vector<double> observable_re;
  std::vector<double> observable_im_residual;
  double s_vn = 0.0;
  double s_h = 0.0;
  double purity = 0.0;
  double trace_residual = 0.0;
  double min_eigenvalue = 0.0;
};

struct CheckResult {
  std::string name;
  bool applicable = true;
  bool passed = false;
  double worst = 0.0;
  double tol = 0.0;
  Json details;
};

struct ScenarioResult {
  std::vector<std::string> observable_names;
  std::vector<TimeSeriesRow> rows;
  std::vector<CheckResult> checks;
  bool checks_passed = true;
  Json resolved_config;
};

// Validates and runs a scenario. checks_override: "all", "none", or a
// comma-separated list; when absent the config's own list applies.
ScenarioResult run_scenario(const Json& config,
                            const std::optional<std::string>& checks_override = std::nullopt);

// timeseries.csv, checks.json, config.resolved.json under out_dir.
void write_scenario_outputs(const ScenarioResult& result, const std::string& out_dir);

std::string render_timeseries_csv(const ScenarioResult& result);
Json render_checks_json(const ScenarioResult& result);

Json list_presets();
Json emit_schema();

// Throws ConfigError (with a field path) if the document does not describe a
// well-formed scenario; returns the config with defaults filled in.
Json validate_config(const Json& config);

// Textual parameter substitution applied to expression strings before
// parsing: identifiers found in params are replaced by their numeric values.
std::string substitute_params(const std::string& text, const Json& params);

}  // namespace hyko
