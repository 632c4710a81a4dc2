#ifndef CDW_LAB_H
#define CDW_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum CdwStatus {
  CDW_STATUS_OK = 0,
  CDW_STATUS_NULL_POINTER = 1,
  CDW_STATUS_DOMAIN = 2,
  CDW_STATUS_OVERFLOW = 3,
  CDW_STATUS_QUADRATURE = 4,
  CDW_STATUS_CONVERGENCE = 5,
  CDW_STATUS_DIAGNOSTIC = 6,
  CDW_STATUS_CONFIG = 7,
  CDW_STATUS_IO = 8,
  CDW_STATUS_INVALID_UTF8 = 9,
  CDW_STATUS_OUT_OF_RANGE = 10,
  CDW_STATUS_PANIC = 11,
} CdwStatus;

/**
 * A run configuration: experiment, constants and numerical settings.
 */
typedef struct CdwConfig CdwConfig;

/**
 * A result table with named `double` columns.
 */
typedef struct CdwTable CdwTable;

/**
 * Per-step record of a single-chain evolution.
 */
typedef struct CdwTrajectory CdwTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread. The pointer stays valid
 * until the next failing call on the same thread. Never null.
 */
const char *cdw_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cdw_version(void);

/**
 * New configuration for the named experiment with default settings.
 *
 * # Safety
 * `experiment` must be a NUL-terminated string and `out` writable.
 */
enum CdwStatus cdw_config_new(const char *experiment, struct CdwConfig **out);

/**
 * Parses `key = value` config text.
 *
 * # Safety
 * `text_in` must be a NUL-terminated string and `out` writable.
 */
enum CdwStatus cdw_config_parse(const char *text_in, struct CdwConfig **out);

/**
 * Sets one config entry using the config-file key names.
 *
 * # Safety
 * `cfg` must come from this library; `key` and `value` NUL-terminated.
 */
enum CdwStatus cdw_config_set(struct CdwConfig *cfg, const char *key, const char *value);

/**
 * # Safety
 * `cfg` must come from this library or be null.
 */
void cdw_config_free(struct CdwConfig *cfg);

/**
 * Runs the configured experiment and writes its CSV to the configured
 * output path.
 *
 * # Safety
 * `cfg` must come from this library.
 */
enum CdwStatus cdw_run(const struct CdwConfig *cfg);

/**
 * Runs the configured experiment and returns its table without writing.
 *
 * # Safety
 * `cfg` must come from this library and `out` be writable.
 */
enum CdwStatus cdw_compute(const struct CdwConfig *cfg, struct CdwTable **out);

/**
 * # Safety
 * `t` must come from this library.
 */
size_t cdw_table_rows(const struct CdwTable *t);

/**
 * # Safety
 * `t` must come from this library.
 */
size_t cdw_table_columns(const struct CdwTable *t);

/**
 * Column name owned by the table; null when out of range.
 *
 * # Safety
 * `t` must come from this library.
 */
const char *cdw_table_column_name(const struct CdwTable *t, size_t col);

/**
 * # Safety
 * `t` must come from this library and `out` be writable.
 */
enum CdwStatus cdw_table_value(const struct CdwTable *t, size_t row, size_t col, double *out);

/**
 * # Safety
 * `t` must come from this library or be null.
 */
void cdw_table_free(struct CdwTable *t);

/**
 * Evolves the configured Gaussian packet with the configured scheme.
 *
 * # Safety
 * `cfg` must come from this library and `out` be writable.
 */
enum CdwStatus cdw_evolve(const struct CdwConfig *cfg, struct CdwTrajectory **out);

/**
 * Number of recorded levels, the initial one included.
 *
 * # Safety
 * `t` must come from this library.
 */
size_t cdw_trajectory_len(const struct CdwTrajectory *t);

/**
 * Step at which the amplitudes overflowed, or 0 when the run completed.
 *
 * # Safety
 * `t` must come from this library.
 */
size_t cdw_trajectory_truncated_at(const struct CdwTrajectory *t);

/**
 * Time, mean phase and norm of level `i`.
 *
 * # Safety
 * `t` must come from this library; the out pointers must be writable.
 */
enum CdwStatus cdw_trajectory_get(const struct CdwTrajectory *t,
                                  size_t i,
                                  double *time,
                                  double *mean_phase,
                                  double *norm);

/**
 * # Safety
 * `t` must come from this library or be null.
 */
void cdw_trajectory_free(struct CdwTrajectory *t);

/**
 * Tilted washboard potential with the config's constants.
 *
 * # Safety
 * `cfg` must come from this library and `out` be writable.
 */
enum CdwStatus cdw_washboard_potential(double phi, const struct CdwConfig *cfg, double *out);

/**
 * Multi-chain potential of `n` phases.
 *
 * # Safety
 * `phis` must point to `n` doubles; `cfg` must come from this library.
 */
enum CdwStatus cdw_multichain_potential(const double *phis,
                                        size_t n,
                                        const struct CdwConfig *cfg,
                                        double *out);

/**
 * Sine-Gordon kink `4·arctan(exp(±(z + βτ)/√(1 − β²)))`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CdwStatus cdw_kink_phase(double z, double tau, double beta, int8_t sign, double *out);

double cdw_erf(double x);

/**
 * # Safety
 * `out` must be writable.
 */
enum CdwStatus cdw_gaussian_norm_constant(double a_exp, double upper, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CdwStatus cdw_soliton_fourier(double k, double l, double *out);

/**
 * Soliton-pair current at field `e` with the config's threshold settings.
 *
 * # Safety
 * `cfg` must come from this library and `out` be writable.
 */
enum CdwStatus cdw_current_beckwith(double e, const struct CdwConfig *cfg, double *out);

/**
 * Zener current; `gated` nonzero applies the threshold gate.
 *
 * # Safety
 * `cfg` must come from this library and `out` be writable.
 */
enum CdwStatus cdw_current_zener(double e, const struct CdwConfig *cfg, bool gated, double *out);

/**
 * Two-chain variational energy and mean phase for coefficient arrays of
 * length 5 (`m = -2..2`), using the config's constants and quadrature.
 *
 * # Safety
 * `b` and `c` must point to 5 doubles; out pointers must be writable.
 */
enum CdwStatus cdw_variational_energy(const double *b,
                                      const double *c,
                                      double alpha,
                                      double theta,
                                      const struct CdwConfig *cfg,
                                      double *energy,
                                      double *mean_phi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDW_LAB_H */
