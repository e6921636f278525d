#ifndef TRIGONAL_SIGMA_H
#define TRIGONAL_SIGMA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  TS_STATUS_CONFIG = 3,
  TS_STATUS_PARSE = 4,
  TS_STATUS_SCHEMA = 5,
  TS_STATUS_PROVENANCE = 6,
  TS_STATUS_INCONSISTENT = 7,
  TS_STATUS_INTERNAL = 8,
} TsStatus;

typedef enum TsVerdict {
  TS_VERDICT_PASS = 0,
  TS_VERDICT_FAIL = 1,
  TS_VERDICT_INDETERMINATE = 2,
} TsVerdict;

/**
 * A built or imported σ expansion.
 */
typedef struct TsSigma TsSigma;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds σ through `max_grade` with the default constraints. `lambdas` is
 * either null (all symbolic) or an array of five entries, each null,
 * `"symbolic"`, or a rational such as `"-3/2"`.
 *
 * # Safety
 * `lambdas`, when non-null, must point to five readable pointers; `out`
 * must be writable.
 */
enum TsStatus ts_sigma_build(uint32_t max_grade, const char *const *lambdas, struct TsSigma **out);

/**
 * # Safety
 * `sigma` must come from this library and not be used afterwards.
 */
void ts_sigma_free(struct TsSigma *sigma);

/**
 * Number of stored coefficients.
 *
 * # Safety
 * `sigma` must be a live handle and `out` writable.
 */
enum TsStatus ts_sigma_term_count(const struct TsSigma *sigma, size_t *out);

/**
 * Serializes σ with its provenance.
 *
 * # Safety
 * `sigma` must be a live handle and `out` writable.
 */
enum TsStatus ts_sigma_to_json(const struct TsSigma *sigma, char **out);

/**
 * Reads σ back, checking the content and provenance hashes.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum TsStatus ts_sigma_from_json(const char *json, struct TsSigma **out);

/**
 * Checks `lhs = rhs` (e.g. `"Q4444 = -3*P33"`) and returns the report as
 * one JSON object. `verdict` may be null.
 *
 * # Safety
 * `sigma` must be a live handle, `relation` NUL-terminated, `report`
 * writable.
 */
enum TsStatus ts_verify_relation(const struct TsSigma *sigma,
                                 const char *relation,
                                 char **report,
                                 enum TsVerdict *verdict);

/**
 * Runs comma-separated suites (or `"all"`), returning JSON lines and the
 * exit code the command-line tool would use. `exit` may be null.
 *
 * # Safety
 * `sigma` must be a live handle, `suites` NUL-terminated, `reports`
 * writable.
 */
enum TsStatus ts_verify_suite(const struct TsSigma *sigma,
                              const char *suites,
                              char **reports,
                              int32_t *exit);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ts_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next call into the library on this thread.
 */
const char *ts_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIGONAL_SIGMA_H */
