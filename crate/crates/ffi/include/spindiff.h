#ifndef SPINDIFF_H
#define SPINDIFF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

/**
 * Result code of every `sd_*` call.
 */
typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_UTF8 = 2,
  SD_STATUS_PARSE_ERROR = 3,
  SD_STATUS_UNKNOWN_IDENTIFIER = 4,
  SD_STATUS_INVALID_ARGUMENT = 5,
  SD_STATUS_ANSATZ_ERROR = 6,
  SD_STATUS_PANIC = 7,
} SdStatus;

typedef enum SdPrintStyle {
  SD_PRINT_STYLE_EXPONENTIAL = 0,
  SD_PRINT_STYLE_TRIG = 1,
} SdPrintStyle;

/**
 * An expression in the half-angle exponential basis.
 */
typedef struct SdExpr SdExpr;

/**
 * A 2x2 matrix of differential operators.
 */
typedef struct SdOp SdOp;

/**
 * A two-component spinor.
 */
typedef struct SdSpinor SdSpinor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sd_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next `sd_*` call on the same thread.
 */
const char *sd_last_error_message(void);

/**
 * Character offset of the last parse error on this thread, or -1.
 */
int64_t sd_last_error_offset(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void sd_string_free(char *s);

/**
 * Parses `text` in the expression grammar.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SdStatus sd_expr_parse(const char *text, struct SdExpr **out);

/**
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum SdStatus sd_expr_print(const struct SdExpr *e, enum SdPrintStyle style, char **out);

/**
 * Evaluates at the given angles (radians).
 *
 * # Safety
 * `e` must be a live handle; `re` and `im` must be writable.
 */
enum SdStatus sd_expr_eval(const struct SdExpr *e,
                           double theta,
                           double phi,
                           double theta_p,
                           double phi_p,
                           double *re,
                           double *im);

/**
 * Exact equality of two expressions.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum SdStatus sd_expr_equal(const struct SdExpr *a, const struct SdExpr *b, bool *out);

/**
 * # Safety
 * `e` must be NULL or a handle not yet freed.
 */
void sd_expr_free(struct SdExpr *e);

/**
 * Builds a named spinor such as `z+` or `ycorr-`.
 *
 * # Safety
 * `id` must be a NUL-terminated string; `out` must be writable.
 */
enum SdStatus sd_spinor_build(const char *id, struct SdSpinor **out);

/**
 * Copies component `index` (0 = top, 1 = bottom) into a new expression.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SdStatus sd_spinor_component(const struct SdSpinor *s, uint32_t index, struct SdExpr **out);

/**
 * # Safety
 * `s` must be NULL or a handle not yet freed.
 */
void sd_spinor_free(struct SdSpinor *s);

/**
 * Builds a named operator: `Sz`, `Sx`, `Sy`, `S2closed`, `S2composed`.
 *
 * # Safety
 * `id` must be a NUL-terminated string; `out` must be writable.
 */
enum SdStatus sd_op_build(const char *id, struct SdOp **out);

/**
 * # Safety
 * `op`, `s` must be live handles; `out` must be writable.
 */
enum SdStatus sd_op_apply(const struct SdOp *op, const struct SdSpinor *s, struct SdSpinor **out);

/**
 * `a` after `b`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum SdStatus sd_op_compose(const struct SdOp *a, const struct SdOp *b, struct SdOp **out);

/**
 * `[a, b]`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum SdStatus sd_op_commutator(const struct SdOp *a, const struct SdOp *b, struct SdOp **out);

/**
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum SdStatus sd_op_is_zero(const struct SdOp *op, bool *out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum SdStatus sd_op_equal(const struct SdOp *a, const struct SdOp *b, bool *out);

/**
 * Entry-by-entry text, one `[r,c]: ...` line per entry.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum SdStatus sd_op_print(const struct SdOp *op, enum SdPrintStyle style, char **out);

/**
 * # Safety
 * `op` must be NULL or a handle not yet freed.
 */
void sd_op_free(struct SdOp *op);

/**
 * Runs a verification suite and returns its JSON report and the number of
 * failed items.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `out_json` and `out_failures`
 * must be writable.
 */
enum SdStatus sd_verify(const char *suite, uint64_t seed, char **out_json, uint32_t *out_failures);

/**
 * Solves an ansatz given as a JSON document; returns the solve report as JSON.
 *
 * # Safety
 * `ansatz_json` must be a NUL-terminated string; `out_json` must be writable.
 */
enum SdStatus sd_solve_json(const char *ansatz_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINDIFF_H */
