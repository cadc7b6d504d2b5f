#ifndef DIRAC_H
#define DIRAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum DiracStatus {
  DIRAC_STATUS_OK = 0,
  DIRAC_STATUS_NULL_POINTER = 1,
  DIRAC_STATUS_INVALID_UTF8 = 2,
  DIRAC_STATUS_INVALID_ARGUMENT = 3,
  DIRAC_STATUS_PARSE = 4,
  DIRAC_STATUS_RUN = 5,
  DIRAC_STATUS_PANIC = 6,
} DiracStatus;

/**
 * Output format for [`dirac_report_render`].
 */
typedef enum DiracFormat {
  DIRAC_FORMAT_TEXT = 0,
  DIRAC_FORMAT_JSON = 1,
} DiracFormat;

/**
 * A polynomial on a patch.
 */
typedef struct DiracExpr DiracExpr;

/**
 * A coordinate patch.
 */
typedef struct DiracPatch DiracPatch;

/**
 * The verdicts of a check run.
 */
typedef struct DiracReport DiracReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The caller
 * frees the result with `dirac_string_free`.
 */
char *dirac_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void dirac_string_free(char *s);

/**
 * Create a patch with `n` coordinate names.
 *
 * # Safety
 * `name` and the `n` entries of `coords` must be valid C strings and `out`
 * a valid pointer.
 */
enum DiracStatus dirac_patch_new(const char *name,
                                 const char *const *coords,
                                 size_t n,
                                 struct DiracPatch **out);

/**
 * # Safety
 * `p` must be NULL or a handle from `dirac_patch_new`, freed once.
 */
void dirac_patch_free(struct DiracPatch *p);

/**
 * Number of coordinates, or 0 for NULL.
 *
 * # Safety
 * `p` must be NULL or a live patch handle.
 */
size_t dirac_patch_dim(const struct DiracPatch *p);

/**
 * Parse a polynomial in the coordinates of `patch`.
 *
 * # Safety
 * `patch` must be a live handle, `src` a C string and `out` a valid pointer.
 */
enum DiracStatus dirac_expr_parse(const struct DiracPatch *patch,
                                  const char *src,
                                  struct DiracExpr **out);

/**
 * # Safety
 * `e` must be NULL or an expression handle, freed once.
 */
void dirac_expr_free(struct DiracExpr *e);

/**
 * Partial derivative with respect to coordinate `i` (0-based).
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer.
 */
enum DiracStatus dirac_expr_diff(const struct DiracExpr *e, size_t i, struct DiracExpr **out);

/**
 * Whether the expression is identically zero. Returns false for NULL.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
bool dirac_expr_is_zero(const struct DiracExpr *e);

/**
 * Canonical text of the expression, or NULL for a NULL handle. Free with
 * `dirac_string_free`.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
char *dirac_expr_to_string(const struct DiracExpr *e);

/**
 * Run a check file given as source text.
 *
 * # Safety
 * `src` must be a C string and `out` a valid pointer.
 */
enum DiracStatus dirac_run_source(const char *src, struct DiracReport **out);

/**
 * Run the built-in example suite.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DiracStatus dirac_run_example_suite(struct DiracReport **out);

/**
 * # Safety
 * `r` must be NULL or a report handle, freed once.
 */
void dirac_report_free(struct DiracReport *r);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t dirac_report_len(const struct DiracReport *r);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t dirac_report_pass_count(const struct DiracReport *r);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t dirac_report_fail_count(const struct DiracReport *r);

/**
 * Process exit code the `verify` binary would use: 0 when every check
 * met its expectation, 1 otherwise. -1 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
int32_t dirac_report_exit_code(const struct DiracReport *r);

/**
 * Render the report as text or JSON. Free with `dirac_string_free`.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
char *dirac_report_render(const struct DiracReport *r, enum DiracFormat format);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRAC_H */
