#ifndef SHIFTKRYLOV_H
#define SHIFTKRYLOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_ARGUMENT = 2,
  SK_STATUS_INVALID_MATRIX = 3,
  SK_STATUS_IO = 4,
  SK_STATUS_BREAKDOWN = 5,
  SK_STATUS_PANIC = 6,
} SkStatus;

typedef enum SkMethod {
  SK_METHOD_QMR_SYM = 0,
  SK_METHOD_QMR_SYM_B = 1,
  SK_METHOD_COCG = 2,
  SK_METHOD_QMR_SYM_OMEGA = 3,
} SkMethod;

typedef enum SkShiftStatus {
  SK_SHIFT_STATUS_CONVERGED = 0,
  SK_SHIFT_STATUS_NOT_CONVERGED = 1,
  SK_SHIFT_STATUS_BREAKDOWN = 2,
} SkShiftStatus;

/**
 * Sparse complex symmetric matrix.
 */
typedef struct SkMatrix SkMatrix;

/**
 * Solutions and per-shift results of one solve.
 */
typedef struct SkSolution SkSolution;

/**
 * Solver settings. `max_iter = 0` means twice the dimension; `workers`
 * of 0 or 1 runs the shift loop on the calling thread.
 */
typedef struct SkSolveOptions {
  double tol;
  size_t max_iter;
  size_t workers;
} SkSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: `tol = 1e-12`, `max_iter = 0`, `workers = 1`.
 */
struct SkSolveOptions sk_solve_options_default(void);

/**
 * Builds an `n × n` matrix from `nnz` zero-based triplets. With `mirrored`
 * each off-diagonal entry is given once and stored at both positions;
 * otherwise the list must already be symmetric.
 *
 * # Safety
 * `rows`, `cols` and `re` must point to `nnz` values; `im` may be null.
 * `out` must be valid for a write.
 */
enum SkStatus sk_matrix_from_triplets(size_t n, size_t nnz, const size_t *rows, const size_t *cols, const double *re, const double *im, bool mirrored, struct SkMatrix **out);

/**
 * Reads a Matrix Market coordinate file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum SkStatus sk_matrix_read_matrix_market(const char *path, struct SkMatrix **out);

/**
 * # Safety
 * `m` must be a live matrix handle; `out` must be valid for a write.
 */
enum SkStatus sk_matrix_dim(const struct SkMatrix *m, size_t *out);

/**
 * # Safety
 * `m` must be null or a handle from `sk_matrix_*` not yet freed.
 */
void sk_matrix_free(struct SkMatrix *m);

/**
 * Solves `(A + σ_ℓ I) x = b` for all `num_shifts` shifts.
 *
 * Returns `SK_STATUS_OK` whenever the solve ran, including when some
 * shifts did not converge or broke down; inspect them with
 * `sk_solution_shift`. A right-hand side whose bilinear self-product
 * vanishes is refused with `SK_STATUS_BREAKDOWN`.
 *
 * # Safety
 * `b_re` must point to `dim(m)` values and `shift_re` to `num_shifts`
 * values; the imaginary arrays may be null. `opts` may be null for
 * defaults. `out` must be valid for a write.
 */
enum SkStatus sk_solve(const struct SkMatrix *m, const double *b_re, const double *b_im, size_t n, const double *shift_re, const double *shift_im, size_t num_shifts, enum SkMethod method, const struct SkSolveOptions *opts, struct SkSolution **out);

/**
 * # Safety
 * `s` must be null or a handle from `sk_solve` not yet freed.
 */
void sk_solution_free(struct SkSolution *s);

/**
 * Number of shifts and Lanczos iterations performed.
 *
 * # Safety
 * `s` must be a live solution handle; either output may be null.
 */
enum SkStatus sk_solution_counts(const struct SkSolution *s, size_t *num_shifts, size_t *iterations);

/**
 * Status, iteration count and relative residual estimate of one shift.
 *
 * # Safety
 * `s` must be a live solution handle; each output may be null.
 */
enum SkStatus sk_solution_shift(const struct SkSolution *s, size_t index, enum SkShiftStatus *status, size_t *iterations, double *estimate);

/**
 * Copies the solution for shift `index` into `re`/`im` (length `len`,
 * which must equal the dimension). `im` may be null.
 *
 * # Safety
 * `re` (and `im` if non-null) must be valid for `len` writes.
 */
enum SkStatus sk_solution_x(const struct SkSolution *s, size_t index, double *re, double *im, size_t len);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next `sk_*` call on the same thread.
 */
const char *sk_last_error(void);

/**
 * Static name of a status code.
 */
const char *sk_status_name(enum SkStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHIFTKRYLOV_H */
