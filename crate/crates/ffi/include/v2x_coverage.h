/* C ABI for the v2x-coverage library. Generated by cbindgen. */

#ifndef V2X_COVERAGE_H
#define V2X_COVERAGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which road populations contribute interference.
 */
typedef enum V2xRoadCase {
  V2xRoadCase_Both = 0,
  V2xRoadCase_OnlyLos = 1,
  V2xRoadCase_OnlyNlos = 2,
} V2xRoadCase;

/**
 * Result code of a C API call.
 */
typedef enum V2xStatus {
  V2xStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  V2xStatus_NullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  V2xStatus_InvalidUtf8 = 2,
  /**
   * A key, value, or scenario constraint was rejected.
   */
  V2xStatus_InvalidParameter = 3,
  /**
   * Quadrature, series, or simulation failure.
   */
  V2xStatus_NumericFailure = 4,
} V2xStatus;

/**
 * Vehicle placement model along each road.
 */
typedef enum V2xVehicleModel {
  V2xVehicleModel_Ppp = 0,
  V2xVehicleModel_Pcp = 1,
} V2xVehicleModel;

/**
 * Opaque scenario handle.
 */
typedef struct V2xScenario V2xScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the most recent error message of this thread into `buf` (always
 * NUL-terminated when `cap > 0`) and returns the full length including the
 * terminator. A return value larger than `cap` means the message was
 * truncated.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes, or be null with
 * `cap == 0` to query the required length.
 */
uintptr_t v2x_last_error_message(char *buf, uintptr_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *v2x_version(void);

/**
 * Creates a scenario holding the reference defaults. Never null.
 * Release with [`v2x_scenario_free`].
 */
struct V2xScenario *v2x_scenario_new(void);

/**
 * Frees a scenario; null is a no-op.
 *
 * # Safety
 * `scenario` must be a pointer returned by [`v2x_scenario_new`] or
 * [`v2x_scenario_from_file`] that has not been freed yet.
 */
void v2x_scenario_free(struct V2xScenario *scenario);

/**
 * Loads a scenario from a config file. Returns null on failure, with the
 * message available via [`v2x_last_error_message`].
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
struct V2xScenario *v2x_scenario_from_file(const char *path);

/**
 * Sets one config key. `value` is a raw TOML value; bare identifiers like
 * `mmwave` are also accepted for string keys. Unknown keys and constraint
 * violations are rejected, leaving the scenario unchanged.
 *
 * # Safety
 * `scenario` must be a live handle; `key` and `value` must be
 * NUL-terminated strings.
 */
enum V2xStatus v2x_scenario_set(struct V2xScenario *scenario, const char *key, const char *value);

/**
 * Evaluates analytic coverage for the scenario. Writes the coverage and
 * outage probabilities through the out pointers.
 *
 * # Safety
 * `scenario` must be a live handle; `out_p_cov` and `out_p_out` must be
 * writable or null (null skips that output).
 */
enum V2xStatus v2x_coverage_eval(const struct V2xScenario *scenario,
                                 enum V2xVehicleModel model,
                                 enum V2xRoadCase road_case,
                                 double *out_p_cov,
                                 double *out_p_out);

/**
 * Runs the Monte Carlo estimator for the scenario with its configured seed.
 * Writes the coverage estimate and the 99% confidence half-width.
 *
 * # Safety
 * Same pointer contract as [`v2x_coverage_eval`].
 */
enum V2xStatus v2x_coverage_simulate(const struct V2xScenario *scenario,
                                     enum V2xVehicleModel model,
                                     enum V2xRoadCase road_case,
                                     uint64_t trials,
                                     double *out_p_hat,
                                     double *out_ci99);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* V2X_COVERAGE_H */
