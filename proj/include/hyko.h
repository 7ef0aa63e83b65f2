/*
 * hyko - hybrid quantum-classical dynamics on a discretized phase space.
 *
 * C API of the shared library. All functions return a status code; on
 * failure hyko_last_error() gives a thread-local message. Strings returned
 * through out-parameters are heap-allocated and must be released with
 * hyko_string_free().
 */
#ifndef HYKO_H
#define HYKO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hyko_status {
  HYKO_OK = 0,
  HYKO_ERR_INVALID_ARGUMENT = 1,
  HYKO_ERR_PARSE = 2,
  HYKO_ERR_VALIDATION = 3,
  HYKO_ERR_NUMERICAL = 4,
  HYKO_ERR_UNSUPPORTED = 5,
  HYKO_ERR_IO = 6,
  /* the scenario ran, produced outputs, and at least one enabled check failed */
  HYKO_ERR_CHECKS_FAILED = 7
} hyko_status;

const char* hyko_version(void);

/* Message describing the most recent failure on this thread. */
const char* hyko_last_error(void);

void hyko_string_free(char* s);

/* Catalog of preset classical Hamiltonians, as a JSON document. */
hyko_status hyko_presets_json(char** out_json);

/* Scenario configuration schema, as a JSON document. */
hyko_status hyko_schema_json(char** out_json);

/*
 * Runs a scenario from a JSON configuration text. Writes timeseries.csv,
 * checks.json, and config.resolved.json under out_dir. checks may be "all",
 * "none", a comma-separated list of suite names, or NULL to use the config's
 * own list. When out_summary_json is non-NULL it receives the check report.
 * Returns HYKO_ERR_CHECKS_FAILED if the run succeeded but an enabled check
 * failed.
 */
hyko_status hyko_run_scenario(const char* config_json, const char* out_dir,
                              const char* checks, int quiet, char** out_summary_json);

/* Same, reading the configuration from a file. */
hyko_status hyko_run_scenario_file(const char* config_path, const char* out_dir,
                                   const char* checks, int quiet, char** out_summary_json);

/* --- small direct surface over the core types ----------------------------- */

typedef struct hyko_grid hyko_grid;

/* boundary: 0 = periodic, 1 = zero. */
hyko_status hyko_grid_create(double q_min, double q_max, double p_min, double p_max,
                             int n_q, int n_p, int boundary, hyko_grid** out_grid);
void hyko_grid_destroy(hyko_grid* grid);
int hyko_grid_num_points(const hyko_grid* grid);
double hyko_grid_cell_weight(const hyko_grid* grid);

/*
 * Evaluates a phase-space expression over q and p on every grid point
 * (row-major). out_values must hold hyko_grid_num_points(grid) doubles.
 */
hyko_status hyko_eval_expression(const char* text, const hyko_grid* grid,
                                 double* out_values);

#ifdef __cplusplus
}
#endif

#endif /* HYKO_H */
