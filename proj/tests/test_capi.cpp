// Exercises the shared library strictly through the public C header.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "hyko.h"

#define REQUIRE(cond)                                                        \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      std::fprintf(stderr, "  last error: %s\n", hyko_last_error());         \
      return 1;                                                              \
    }                                                                        \
  } while (0)

static const char* kConfig = R"json({
  "grid": {"q_min": -6, "q_max": 6, "p_min": -6, "p_max": 6, "n_q": 8, "n_p": 8},
  "quantum_dim": 2,
  "hamiltonian": {"classical": "harmonic", "quantum": [[0.5,0],[0,0],[0,0],[-0.5,0]]},
  "initial_state": {"kind": "product", "classical": "exp(-((q-1)^2+p^2)/2)",
                    "quantum": [[1,0],[0,0],[0,0],[0,0]]},
  "time": {"t_end": 0.5, "n_samples": 2},
  "seed": 3
})json";

int main() {
  REQUIRE(std::strlen(hyko_version()) > 0);

  char* json = nullptr;
  REQUIRE(hyko_presets_json(&json) == HYKO_OK);
  REQUIRE(std::strstr(json, "harmonic") != nullptr);
  hyko_string_free(json);

  json = nullptr;
  REQUIRE(hyko_schema_json(&json) == HYKO_OK);
  REQUIRE(std::strstr(json, "quantum_dim") != nullptr);
  hyko_string_free(json);

  hyko_grid* grid = nullptr;
  REQUIRE(hyko_grid_create(-1, 1, -1, 1, 4, 4, 0, &grid) == HYKO_OK);
  REQUIRE(hyko_grid_num_points(grid) == 16);
  REQUIRE(std::fabs(hyko_grid_cell_weight(grid) - 0.25) < 1e-15);

  double values[16];
  REQUIRE(hyko_eval_expression("q*p+1", grid, values) == HYKO_OK);
  REQUIRE(std::fabs(values[0] - ((-1.0) * (-1.0) + 1.0)) < 1e-14);
  REQUIRE(hyko_eval_expression("q +", grid, values) == HYKO_ERR_PARSE);
  REQUIRE(std::strlen(hyko_last_error()) > 0);
  hyko_grid_destroy(grid);

  // grid validation surfaces as a status code
  hyko_grid* bad = nullptr;
  REQUIRE(hyko_grid_create(1, -1, 0, 1, 4, 4, 0, &bad) == HYKO_ERR_INVALID_ARGUMENT);

  auto out_dir = std::filesystem::temp_directory_path() / "hyko_capi_test";
  std::filesystem::remove_all(out_dir);
  char* summary = nullptr;
  REQUIRE(hyko_run_scenario(kConfig, out_dir.string().c_str(), "trace,positivity", 1,
                            &summary) == HYKO_OK);
  REQUIRE(summary != nullptr);
  REQUIRE(std::strstr(summary, "\"passed\": true") != nullptr);
  hyko_string_free(summary);
  REQUIRE(std::filesystem::exists(out_dir / "timeseries.csv"));
  REQUIRE(std::filesystem::exists(out_dir / "checks.json"));
  REQUIRE(std::filesystem::exists(out_dir / "config.resolved.json"));

  REQUIRE(hyko_run_scenario("{ not json", nullptr, nullptr, 1, nullptr) == HYKO_ERR_PARSE);
  REQUIRE(hyko_run_scenario("{}", nullptr, nullptr, 1, nullptr) ==
          HYKO_ERR_INVALID_ARGUMENT);

  std::printf("capi test passed\n");
  return 0;
}
