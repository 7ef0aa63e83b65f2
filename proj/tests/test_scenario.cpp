#include <doctest.h>

#include <cmath>

#include "scenario.hpp"

using namespace hyko;

namespace {

Json minimal_config() {
  return Json::parse(R"json({
    "grid": {"q_min": -6, "q_max": 6, "p_min": -6, "p_max": 6, "n_q": 8, "n_p": 8},
    "quantum_dim": 2,
    "hamiltonian": {
      "classical": "harmonic",
      "quantum": [[0.5,0],[0,0],[0,0],[-0.5,0]]
    },
    "initial_state": {
      "kind": "product",
      "classical": "exp(-((q-1)^2+p^2)/2)",
      "quantum": [[1,0],[0,0],[0,0],[0,0]]
    },
    "time": {"t_end": 1.0, "n_samples": 3},
    "observables": [
      {"name": "mean_q", "terms": [{"classical": "q", "quantum": [[1,0],[0,0],[0,0],[1,0]]}]}
    ],
    "checks": ["trace", "positivity", "entropy"],
    "seed": 7
  })json");
}

}  // namespace

TEST_CASE("config validation reports field paths") {
  Json config = minimal_config();
  config.at("grid").erase("n_q");
  try {
    validate_config(config);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "grid.n_q");
  }

  Json config2 = minimal_config();
  config2["time"]["t_end"] = -2.0;
  try {
    validate_config(config2);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "time.t_end");
  }

  Json config3 = minimal_config();
  config3["lift"] = "sideways";
  CHECK_THROWS_AS(validate_config(config3), ConfigError);

  // defaults are materialized
  Json resolved = validate_config(minimal_config());
  CHECK(resolved.at("grid").at("boundary") == "periodic");
  CHECK(resolved.at("lift") == "block_diagonal");
  CHECK(resolved.at("hamiltonian").at("scheme") == "stencil2");
}

TEST_CASE("parameter substitution") {
  Json params = Json::parse(R"json({"lambda": 0.5, "omega": 2.0})json");
  CHECK(substitute_params("lambda*q", params) == "(0.5)*q");
  CHECK(substitute_params("omega*lambda", params) == "(2)*(0.5)");
  // identifiers are matched on word boundaries only
  CHECK(substitute_params("lambda2*q", params) == "lambda2*q");
  CHECK(substitute_params("sin(q)", params) == "sin(q)");
}

TEST_CASE("run_scenario produces a consistent time series") {
  auto result = run_scenario(minimal_config());
  CHECK(result.checks_passed);
  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows.front().time == 0.0);
  CHECK(result.rows.back().time == doctest::Approx(1.0));
  for (const auto& row : result.rows) {
    CHECK(row.trace_residual < 1e-10);
    CHECK(row.min_eigenvalue > -1e-9);
    CHECK(std::abs(row.s_vn - result.rows.front().s_vn) < 1e-8);
    CHECK(row.purity <= 1.0 + 1e-12);
  }
  // decoupled evolution leaves the quantum marginal pure
  for (const auto& row : result.rows) CHECK(row.purity > 1.0 - 1e-10);

  // determinism at the rendering level
  auto result2 = run_scenario(minimal_config());
  CHECK(render_timeseries_csv(result) == render_timeseries_csv(result2));
  CHECK(render_checks_json(result).dump() == render_checks_json(result2).dump());
}

TEST_CASE("checks override and failure reporting") {
  auto result = run_scenario(minimal_config(), std::string("none"));
  CHECK(result.checks.empty());
  CHECK(result.checks_passed);

  auto all = run_scenario(minimal_config(), std::string("all"));
  CHECK(all.checks.size() == 8);
  bool found_nbr = false;
  for (const auto& c : all.checks) {
    if (c.name == "no_back_reaction") {
      found_nbr = true;
      CHECK(!c.applicable);  // no coupling configured
    } else {
      CHECK(c.passed);
    }
  }
  CHECK(found_nbr);
  CHECK(all.checks_passed);

  CHECK_THROWS_AS(run_scenario(minimal_config(), std::string("bogus_suite")), ConfigError);
}

TEST_CASE("coupled scenario with spectral scheme has no marginal back-reaction") {
  Json config = minimal_config();
  config["grid"]["n_q"] = 16;
  config["grid"]["n_p"] = 16;
  config["hamiltonian"]["scheme"] = "spectral";
  config["hamiltonian"]["coupling"] = Json::array(
      {Json{{"classical", "lambda*q"},
            {"quantum", Json::parse("[[0,0],[1,0],[1,0],[0,0]]")},
            {"strength", 1.0}}});
  config["params"] = Json{{"lambda", 0.5}};
  config["time"] = Json{{"t_end", 2.0}, {"n_samples", 5}};
  config["checks"] = Json::array({"trace", "no_back_reaction"});
  auto result = run_scenario(config);
  CHECK(result.checks_passed);
  for (const auto& c : result.checks)
    if (c.name == "no_back_reaction") {
      CHECK(c.applicable);
      CHECK(c.worst < 1e-8);
    }
  // the coupling decoheres the qubit
  CHECK(result.rows.back().purity < 1.0 - 1e-3);
}

TEST_CASE("presets catalog and schema") {
  Json presets = list_presets();
  bool has_harmonic = false;
  for (const auto& p : presets.at("presets")) has_harmonic |= p.at("name") == "harmonic";
  CHECK(has_harmonic);
  CHECK(presets.at("presets").size() == 3);

  Json schema = emit_schema();
  CHECK(schema.at("type") == "object");
  CHECK(schema.at("properties").contains("grid"));
  CHECK(schema.at("properties").at("time").at("properties").at("t_end").at("minimum") == 0);
  // the bundled-style config validates against the implementation of the schema
  CHECK_NOTHROW(validate_config(minimal_config()));
}

TEST_CASE("custom initial states are mixtures of product terms") {
  Json config = minimal_config();
  config["initial_state"] = Json::parse(R"json({
    "kind": "custom",
    "terms": [
      {"weight": 0.5, "classical": "exp(-((q-1)^2+p^2)/2)", "quantum": [[1,0],[0,0],[0,0],[0,0]]},
      {"weight": 0.5, "classical": "exp(-((q+1)^2+p^2)/2)", "quantum": [[0,0],[0,0],[0,0],[1,0]]}
    ]
  })json");
  auto result = run_scenario(config);
  CHECK(result.checks_passed);
  CHECK(result.rows.front().purity < 1.0 - 1e-3);  // genuinely mixed
}
