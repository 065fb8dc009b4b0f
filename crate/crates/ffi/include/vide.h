#ifndef VIDE_H
#define VIDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VideStatus {
  VIDE_STATUS_OK = 0,
  VIDE_STATUS_NULL_POINTER = 1,
  /**
   * A string argument is not valid UTF-8.
   */
  VIDE_STATUS_INVALID_UTF8 = 2,
  /**
   * Expression or problem-file syntax error, or a variable restriction.
   */
  VIDE_STATUS_PARSE = 3,
  /**
   * Step size, step count, depth, range or other argument out of domain.
   */
  VIDE_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The solver aborted at a step.
   */
  VIDE_STATUS_SOLVER = 5,
  VIDE_STATUS_UNKNOWN_NAME = 6,
  VIDE_STATUS_PANIC = 7,
} VideStatus;

typedef enum VideRegion {
  VIDE_REGION_REGION_I = 1,
  VIDE_REGION_REGION_II = 2,
  VIDE_REGION_REGION_III = 3,
  VIDE_REGION_REGION_IV = 4,
  VIDE_REGION_BOUNDARY_I_AND_II = 12,
  VIDE_REGION_BOUNDARY_II_AND_III = 23,
  VIDE_REGION_BOUNDARY_III_AND_IV = 34,
} VideRegion;

/**
 * Opaque problem handle.
 */
typedef struct VideProblem VideProblem;

/**
 * Opaque solution handle.
 */
typedef struct VideTrajectory VideTrajectory;

typedef struct VideRoots {
  double r1_re;
  double r1_im;
  double r2_re;
  double r2_im;
} VideRoots;

typedef struct VideStability {
  double b1;
  double b2;
  struct VideRoots roots;
  bool stable;
} VideStability;

typedef struct VideThresholds {
  double alpha0;
  double alpha1;
  double alpha2;
} VideThresholds;

typedef struct VideBifurcation {
  double b1;
  double b2;
  struct VideRoots roots;
  struct VideThresholds thresholds;
  enum VideRegion region;
} VideBifurcation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *vide_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *vide_version(void);

/**
 * Builds a problem from expression strings. `exact` may be null.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum VideStatus vide_problem_new(const char *name,
                                 const char *f,
                                 const char *kernel,
                                 double x0,
                                 double y0,
                                 const char *exact,
                                 struct VideProblem **out);

/**
 * Builds a problem from problem-file text (`key = value` lines).
 *
 * # Safety
 * `text` must be null or NUL-terminated; `out` must be writable.
 */
enum VideStatus vide_problem_from_text(const char *text, struct VideProblem **out);

/**
 * One of the built-in examples `ex1` … `ex4`.
 *
 * # Safety
 * `name` must be null or NUL-terminated; `out` must be writable.
 */
enum VideStatus vide_problem_builtin(const char *name, struct VideProblem **out);

/**
 * # Safety
 * `problem` must be null or a handle from this library not yet freed.
 */
void vide_problem_free(struct VideProblem *problem);

/**
 * Solves with `steps` steps of size `h` and a `depth`-term DJM correction
 * (3 is the standard method).
 *
 * # Safety
 * `problem` must be a live handle; `out` must be writable.
 */
enum VideStatus vide_solve(const struct VideProblem *problem,
                           double h,
                           size_t steps,
                           size_t depth,
                           struct VideTrajectory **out);

/**
 * Number of grid points (`steps + 1`), or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t vide_trajectory_len(const struct VideTrajectory *t);

/**
 * Grid nodes, `vide_trajectory_len` entries owned by the handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
const double *vide_trajectory_nodes(const struct VideTrajectory *t);

/**
 * Computed values, `vide_trajectory_len` entries owned by the handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
const double *vide_trajectory_values(const struct VideTrajectory *t);

/**
 * # Safety
 * `t` must be null or a handle from this library not yet freed.
 */
void vide_trajectory_free(struct VideTrajectory *t);

/**
 * Stability of the scheme at `(u, v) = (h·alpha, h²·beta)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum VideStatus vide_assess_stability(double u, double v, struct VideStability *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum VideStatus vide_bifurcation_thresholds(double h, struct VideThresholds *out);

/**
 * Region of `alpha` at step `h`; boundaries are bands of half-width `tol`.
 *
 * # Safety
 * `out` must be writable.
 */
enum VideStatus vide_classify_bifurcation(double alpha,
                                          double h,
                                          double tol,
                                          struct VideBifurcation *out);

/**
 * Label such as `"II"` or `"boundary-II/III"` as a static string.
 */
const char *vide_region_label(enum VideRegion region);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIDE_H */
