#ifndef BRAIDCAT_H
#define BRAIDCAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum {
  BRAIDCAT_STATUS_OK = 0,
  BRAIDCAT_STATUS_NULL_POINTER = 1,
  BRAIDCAT_STATUS_INVALID_STRING = 2,
  BRAIDCAT_STATUS_INVALID_INPUT = 3,
  BRAIDCAT_STATUS_INVARIANT_VIOLATED = 4,
  BRAIDCAT_STATUS_NUMERICAL_FAILURE = 5,
  BRAIDCAT_STATUS_BUFFER_TOO_SMALL = 6,
  BRAIDCAT_STATUS_PANIC = 7,
} BraidcatStatus;

typedef struct BraidcatCore BraidcatCore;

typedef struct BraidcatGroup BraidcatGroup;

typedef struct BraidcatRMatrix BraidcatRMatrix;

typedef struct BraidcatReport BraidcatReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *braidcat_version(void);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next call on this thread.
 */
const char *braidcat_last_error(void);

/**
 * Loads a builtin group name or a JSON group spec path.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 */
BraidcatStatus braidcat_group_load(const char *spec, BraidcatGroup **out);

/**
 * # Safety
 * `group` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_group_dim(const BraidcatGroup *group, size_t *out);

/**
 * # Safety
 * `group` must be NULL or a handle from `braidcat_group_load` not yet freed.
 */
void braidcat_group_free(BraidcatGroup *group);

/**
 * Loads a builtin R-matrix name or JSON spec path for `group`; the axioms are checked on load.
 *
 * # Safety
 * `group` must be a live handle, `spec` a valid string and `out` a valid pointer.
 */
BraidcatStatus braidcat_rmatrix_load(const BraidcatGroup *group,
                                     const char *spec,
                                     BraidcatRMatrix **out);

/**
 * Side length of `R`, which is `dim(H)²`.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_rmatrix_size(const BraidcatRMatrix *r, size_t *out);

/**
 * Copies `R` row-major into `re` and `im`, each of length at least `size²`.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
BraidcatStatus braidcat_rmatrix_entries(const BraidcatRMatrix *r,
                                        double *re,
                                        double *im,
                                        size_t len);

/**
 * # Safety
 * `r` must be NULL or a handle from `braidcat_rmatrix_load` not yet freed.
 */
void braidcat_rmatrix_free(BraidcatRMatrix *r);

/**
 * Builds the braided core `A⊠A` for `r`.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_core_build(const BraidcatRMatrix *r, BraidcatCore **out);

/**
 * Dimension of the core algebra.
 *
 * # Safety
 * `core` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_core_dim(const BraidcatCore *core, size_t *out);

/**
 * Normalized residual of `V₁αV₂β = V₂βV₁αR₁₂`.
 *
 * # Safety
 * `core` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_core_braiding_residual(const BraidcatCore *core, double *out);

/**
 * Recovers `R` from the core and reports the entrywise distance to the input `R`.
 *
 * # Safety
 * `core` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_core_extraction_residual(const BraidcatCore *core, double *out);

/**
 * # Safety
 * `core` must be NULL or a handle from `braidcat_core_build` not yet freed.
 */
void braidcat_core_free(BraidcatCore *core);

/**
 * Runs a CLI pipeline. `group`, `rmatrix` and `objects` (comma-separated) may be NULL;
 * `tolerance <= 0` keeps the built-in limits. Failed checks still return `Ok`;
 * inspect the report with `braidcat_report_pass`.
 *
 * # Safety
 * String arguments must be NULL or valid NUL-terminated strings and `out` a valid pointer.
 */
BraidcatStatus braidcat_run(const char *command,
                            const char *group,
                            const char *rmatrix,
                            const char *objects,
                            double tolerance,
                            BraidcatReport **out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_report_pass(const BraidcatReport *report, bool *out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
BraidcatStatus braidcat_report_check_count(const BraidcatReport *report, size_t *out);

/**
 * Writes the JSON report into `buf`. `*written` receives the required size
 * including the NUL; call with `buf = NULL` to query it.
 *
 * # Safety
 * `buf` must be NULL or point to `len` writable bytes; `written` may be NULL.
 */
BraidcatStatus braidcat_report_json(const BraidcatReport *report,
                                    char *buf,
                                    size_t len,
                                    size_t *written);

/**
 * # Safety
 * `report` must be NULL or a handle from `braidcat_run` not yet freed.
 */
void braidcat_report_free(BraidcatReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRAIDCAT_H */
