#ifndef FRACBURGERS_H
#define FRACBURGERS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum FbStatus {
  FB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FB_STATUS_NULL_POINTER = 1,
  /**
   * Bad input: order, grid size, point outside the domain, config text.
   */
  FB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The computation failed (e.g. the Gram matrix lost positive definiteness).
   */
  FB_STATUS_NUMERICAL = 3,
  /**
   * The problem has no exact solution to compare against.
   */
  FB_STATUS_MISSING_EXACT = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  FB_STATUS_PANIC = 5,
} FbStatus;

/**
 * Opaque problem handle.
 */
typedef struct FbProblem FbProblem;

/**
 * Opaque solution handle.
 */
typedef struct FbSolution FbSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *fb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fb_version(void);

/**
 * Builds one of the built-in examples (`1` or `2`) at order `alpha`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum FbStatus fb_problem_example(uint32_t example, double alpha, struct FbProblem **out);

/**
 * Builds a problem from `key = value` text with the keys `name`, `k1`..`k4`,
 * `f` and `exact` in the expression syntax of the command-line config files.
 *
 * # Safety
 * `text` must be null or a NUL-terminated string; `out` must be null or
 * valid for writing one pointer.
 */
enum FbStatus fb_problem_from_config(const char *text, double alpha, struct FbProblem **out);

/**
 * Releases a problem. Null is ignored.
 *
 * # Safety
 * `problem` must be null or a handle from this library not yet freed.
 */
void fb_problem_free(struct FbProblem *problem);

/**
 * Solves on the uniform `p × q` collocation grid. `nodes` is the
 * quadrature size (0 selects the default) and `picard` the number of extra
 * fixed-point passes.
 *
 * # Safety
 * `problem` must be null or a live handle; `out` must be null or valid for
 * writing one pointer.
 */
enum FbStatus fb_solve(const struct FbProblem *problem,
                       size_t p,
                       size_t q,
                       size_t nodes,
                       size_t picard,
                       struct FbSolution **out);

/**
 * Releases a solution. Null is ignored.
 *
 * # Safety
 * `solution` must be null or a handle from this library not yet freed.
 */
void fb_solution_free(struct FbSolution *solution);

/**
 * Number of basis functions, `p · q`. Returns 0 for null.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t fb_solution_len(const struct FbSolution *solution);

/**
 * Evaluates the approximation (or its `dxi_order`-th ξ-derivative, up to 2)
 * at a point of the unit square.
 *
 * # Safety
 * `solution` must be null or a live handle; `out` must be null or valid for
 * writing one double.
 */
enum FbStatus fb_solution_evaluate(const struct FbSolution *solution,
                                   double xi,
                                   double eta,
                                   uint32_t dxi_order,
                                   double *out);

/**
 * PDE residual of the approximation at a point.
 *
 * # Safety
 * As for [`fb_solution_evaluate`].
 */
enum FbStatus fb_solution_residual(const struct FbSolution *solution,
                                   double xi,
                                   double eta,
                                   double *out);

/**
 * Copies the expansion coefficients in the collocation basis into `buf`.
 * `len` must be at least [`fb_solution_len`].
 *
 * # Safety
 * `solution` must be null or a live handle; `buf` must be null or valid for
 * writing `len` doubles.
 */
enum FbStatus fb_solution_coefficients(const struct FbSolution *solution, double *buf, size_t len);

/**
 * Largest absolute error against the exact solution on the
 * `{0.1, ..., 0.6}²` table mesh.
 *
 * # Safety
 * `solution` must be null or a live handle; `out` must be null or valid for
 * writing one double.
 */
enum FbStatus fb_solution_max_error(const struct FbSolution *solution, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACBURGERS_H */
