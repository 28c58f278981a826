#ifndef QLAB_H
#define QLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlabStatus {
  QLAB_STATUS_OK = 0,
  QLAB_STATUS_NULL_POINTER = 1,
  QLAB_STATUS_INVALID_UTF8 = 2,
  QLAB_STATUS_PARSE_ERROR = 3,
  QLAB_STATUS_RESOURCE_LIMIT = 4,
  /**
   * The check ran and found a counterexample; the report is still written.
   */
  QLAB_STATUS_FAILURE_FOUND = 5,
  QLAB_STATUS_INVALID_ARGUMENT = 6,
  QLAB_STATUS_UNKNOWN_IDENTITY = 7,
  QLAB_STATUS_INTERNAL = 8,
} QlabStatus;

/**
 * Opaque handle to a truncated series.
 */
typedef struct QlabSeries QlabSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qlab_version(void);

/**
 * Message for the last failing call on this thread, or NULL. Valid until the next call that fails.
 */
const char *qlab_last_error_message(void);

/**
 * Expand `expr` to `n` coefficients, exactly when `modulus` is 0 and modulo `modulus` otherwise.
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QlabStatus qlab_expand(const char *expr, size_t n, uint64_t modulus, struct QlabSeries **out);

/**
 * DSOME(0..n-1) through the Lambert pipeline.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QlabStatus qlab_dsome_series(size_t n, uint64_t modulus, struct QlabSeries **out);

/**
 * Number of coefficients held, 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
size_t qlab_series_len(const struct QlabSeries *s);

/**
 * Modulus of the coefficient ring, 0 for exact series and for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
uint64_t qlab_series_modulus(const struct QlabSeries *s);

/**
 * Coefficient `i` as a signed 64-bit integer.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum QlabStatus qlab_series_coeff_i64(const struct QlabSeries *s, size_t i, int64_t *out);

/**
 * Coefficient `i` as decimal text (`p/q` for non-integral rationals).
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum QlabStatus qlab_series_coeff_string(const struct QlabSeries *s, size_t i, char **out);

/**
 * # Safety
 * `s` must be NULL or a handle not yet freed.
 */
void qlab_series_free(struct QlabSeries *s);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void qlab_string_free(char *s);

/**
 * Verify one built-in identity. `precision` 0 means the record's default.
 * Writes the JSON report and returns `FailureFound` when the outcome is not the expected one.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `report_json` a valid pointer.
 */
enum QlabStatus qlab_verify_identity(const char *id, size_t precision, char **report_json);

/**
 * Check a claim such as `DSOME[25n+6] == 0 mod 4` for `n <= n_max`.
 *
 * # Safety
 * `claim` must be a NUL-terminated string and `report_json` a valid pointer.
 */
enum QlabStatus qlab_check_claim(const char *claim, size_t n_max, char **report_json);

/**
 * Verify the whole built-in corpus; writes a JSON array of reports.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum QlabStatus qlab_verify_all_json(size_t precision, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLAB_H */
