#ifndef SPINDETECT_H
#define SPINDETECT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The numeric values of `SPD_CONFIG` and `SPD_NUMERICAL`
 * match the command-line exit codes.
 */
typedef enum SpdStatus {
  SPD_OK = 0,
  SPD_NULL_POINTER = 1,
  SPD_CONFIG = 2,
  SPD_NUMERICAL = 3,
  SPD_INVALID_UTF8 = 4,
  SPD_OUT_OF_RANGE = 5,
  SPD_PANIC = 6,
} SpdStatus;

/**
 * Run configuration handle.
 */
typedef struct SpdConfig SpdConfig;

/**
 * Ensemble result handle.
 */
typedef struct SpdEnsemble SpdEnsemble;

/**
 * Homodyne record handle.
 */
typedef struct SpdRecord SpdRecord;

/**
 * One point of the error-vs-time curves.
 */
typedef struct SpdCurvePoint {
  double t_s;
  double error_threshold_analytic;
  double error_threshold_empirical;
  double error_bayes_empirical;
} SpdCurvePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *spd_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spd_version(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void spd_string_free(char *s);

/**
 * Configuration from a preset name: "nv", "bi" or "sim".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` a writable pointer.
 */
enum SpdStatus spd_config_from_preset(const char *name, struct SpdConfig **out);

/**
 * Configuration from a JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a writable pointer.
 */
enum SpdStatus spd_config_from_json(const char *json, struct SpdConfig **out);

/**
 * Serialize a configuration; free the result with `spd_string_free`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable pointer.
 */
enum SpdStatus spd_config_to_json(const struct SpdConfig *cfg, char **out);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum SpdStatus spd_config_set_seed(struct SpdConfig *cfg, uint64_t seed);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum SpdStatus spd_config_set_trials(struct SpdConfig *cfg, size_t trials);

/**
 * Set the duration in units of τ₁.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum SpdStatus spd_config_set_duration_tau1(struct SpdConfig *cfg, double tau1_units);

/**
 * # Safety
 * `cfg` must be a live handle or null.
 */
void spd_config_free(struct SpdConfig *cfg);

/**
 * τ₁ of the configured model, s.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable pointer.
 */
enum SpdStatus spd_config_tau1(const struct SpdConfig *cfg, double *out);

/**
 * Design report as JSON; free the result with `spd_string_free`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable pointer.
 */
enum SpdStatus spd_design_report_json(const struct SpdConfig *cfg, char **out);

/**
 * Simulate one record of the configured duration at the first efficiency
 * of the list. Spin-present records use RNG stream 0, spin-absent 1.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable pointer.
 */
enum SpdStatus spd_record_simulate(const struct SpdConfig *cfg,
                                   bool spin_present,
                                   struct SpdRecord **out);

/**
 * # Safety
 * `rec` must be a live handle.
 */
size_t spd_record_len(const struct SpdRecord *rec);

/**
 * # Safety
 * `rec` must be a live handle.
 */
double spd_record_dt(const struct SpdRecord *rec);

/**
 * Copy the increments dY into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `rec` must be a live handle; `buf` must be valid for `len` writes.
 */
enum SpdStatus spd_record_copy(const struct SpdRecord *rec, double *buf, size_t len);

/**
 * Posterior probability of "spin" at the end of the record.
 *
 * # Safety
 * `cfg` and `rec` must be live handles; `out` a writable pointer.
 */
enum SpdStatus spd_record_posterior(const struct SpdConfig *cfg,
                                    const struct SpdRecord *rec,
                                    double *out);

/**
 * # Safety
 * `rec` must be a live handle or null.
 */
void spd_record_free(struct SpdRecord *rec);

/**
 * Run an ensemble at efficiency `eta`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable pointer.
 */
enum SpdStatus spd_ensemble_run(const struct SpdConfig *cfg, double eta, struct SpdEnsemble **out);

/**
 * Number of trials that completed.
 *
 * # Safety
 * `ens` must be a live handle.
 */
size_t spd_ensemble_trials_used(const struct SpdEnsemble *ens);

/**
 * # Safety
 * `ens` must be a live handle.
 */
size_t spd_ensemble_curve_len(const struct SpdEnsemble *ens);

/**
 * # Safety
 * `ens` must be a live handle; `out` a writable pointer.
 */
enum SpdStatus spd_ensemble_curve_point(const struct SpdEnsemble *ens,
                                        size_t index,
                                        struct SpdCurvePoint *out);

/**
 * # Safety
 * `ens` must be a live handle or null.
 */
void spd_ensemble_free(struct SpdEnsemble *ens);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINDETECT_H */
