#ifndef MAXENT_H
#define MAXENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum MaxentStatus {
  MAXENT_STATUS_OK = 0,
  MAXENT_STATUS_INVALID_INPUT = 1,
  MAXENT_STATUS_DIMENSION_MISMATCH = 2,
  MAXENT_STATUS_SUPPORT_MISMATCH = 3,
  MAXENT_STATUS_INFEASIBLE_TARGET = 4,
  MAXENT_STATUS_DEGENERATE_POTENTIAL = 5,
  // The solution handle, if requested, still holds the best iterate.
  MAXENT_STATUS_MAX_ITER_EXCEEDED = 6,
  MAXENT_STATUS_ENUMERATION_TOO_LARGE = 7,
  MAXENT_STATUS_NO_COHERENT_TYPE = 8,
  MAXENT_STATUS_NO_FEASIBLE_POINT = 9,
  MAXENT_STATUS_INVALID_RANGE = 10,
  MAXENT_STATUS_NULL_POINTER = 11,
  MAXENT_STATUS_PANIC = 12,
} MaxentStatus;

// Solver settings. Created with [`maxent_config_new`].
typedef struct MaxentConfig MaxentConfig;

// Multipliers and distribution returned by the solvers.
typedef struct MaxentSolution MaxentSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. The pointer stays
// valid until the next call into this library from the same thread.
const char *maxent_last_error(void);

// Static name of a status code.
const char *maxent_status_name(enum MaxentStatus status);

// New config with default settings. Free with [`maxent_config_free`].
struct MaxentConfig *maxent_config_new(void);

// # Safety
// `cfg` must be null or come from [`maxent_config_new`], and not be freed twice.
void maxent_config_free(struct MaxentConfig *cfg);

// Sets all solver settings at once. Invalid values are rejected and leave
// `cfg` unchanged.
//
// # Safety
// `cfg` must be null or a live config handle.
enum MaxentStatus maxent_config_set(struct MaxentConfig *cfg,
                                    double tol_residual,
                                    size_t max_iter,
                                    double lambda_blowup,
                                    double damping);

// `dist(u)` written to `out` (length `m`).
//
// # Safety
// `u` must be valid for `m` reads and `out` for `m` writes.
enum MaxentStatus maxent_dist(const double *u, size_t m, double *out);

// Shannon entropy of `p` in nats.
//
// # Safety
// `p` must be valid for `m` reads and `out` must be writable.
enum MaxentStatus maxent_shannon_entropy(const double *p, size_t m, double *out);

// Maximum-likelihood scalar `λ` fitting `dist(λu)` to frequencies `r`.
// `cfg` may be null for defaults. `*out` is set to null on failure.
//
// # Safety
// `u` and `r` must be valid for `m` reads, `cfg` null or live, `out` writable.
enum MaxentStatus maxent_solve_ml(const double *u,
                                  const double *r,
                                  size_t m,
                                  const struct MaxentConfig *cfg,
                                  struct MaxentSolution **out);

// Maximum-entropy distribution with the same mean of `u` as `r`.
//
// # Safety
// Same as [`maxent_solve_ml`].
enum MaxentStatus maxent_solve_maxent(const double *u,
                                      const double *r,
                                      size_t m,
                                      const struct MaxentConfig *cfg,
                                      struct MaxentSolution **out);

// Maximum-entropy `p` with `X p = y`. `x` is `j × m`, row-major.
//
// # Safety
// `x` must be valid for `j * m` reads, `y` for `j` reads, `cfg` null or
// live, `out` writable.
enum MaxentStatus maxent_solve_inverse(const double *x,
                                       size_t j,
                                       size_t m,
                                       const double *y,
                                       const struct MaxentConfig *cfg,
                                       struct MaxentSolution **out);

// Most probable type of size `n` whose mean of `u` lies within `delta` of
// `c`. A null `delta` selects the default window. `counts` receives `m`
// entries; `log_multiplicity` may be null.
//
// # Safety
// `u` must be valid for `m` reads, `counts` for `m` writes, `delta` and
// `log_multiplicity` null or valid.
enum MaxentStatus maxent_most_probable_coherent_type(uint64_t n,
                                                     const double *u,
                                                     size_t m,
                                                     double c,
                                                     const double *delta,
                                                     uint64_t *counts,
                                                     double *log_multiplicity);

// # Safety
// `sol` must be null or come from a solver call, and not be freed twice.
void maxent_solution_free(struct MaxentSolution *sol);

// Number of outcomes, or 0 for a null handle.
//
// # Safety
// `sol` must be null or live.
size_t maxent_solution_pmf_len(const struct MaxentSolution *sol);

// Number of multipliers, or 0 for a null handle.
//
// # Safety
// `sol` must be null or live.
size_t maxent_solution_lambda_len(const struct MaxentSolution *sol);

// Copies the distribution into `out`; `len` must equal
// [`maxent_solution_pmf_len`].
//
// # Safety
// `sol` must be live and `out` valid for `len` writes.
enum MaxentStatus maxent_solution_copy_pmf(const struct MaxentSolution *sol,
                                           double *out,
                                           size_t len);

// Copies the multipliers into `out`; `len` must equal
// [`maxent_solution_lambda_len`].
//
// # Safety
// `sol` must be live and `out` valid for `len` writes.
enum MaxentStatus maxent_solution_copy_lambda(const struct MaxentSolution *sol,
                                              double *out,
                                              size_t len);

// Max-norm constraint residual, or NaN for a null handle.
//
// # Safety
// `sol` must be null or live.
double maxent_solution_residual(const struct MaxentSolution *sol);

// # Safety
// `sol` must be null or live.
size_t maxent_solution_iterations(const struct MaxentSolution *sol);

// # Safety
// `sol` must be null or live.
bool maxent_solution_converged(const struct MaxentSolution *sol);

// True when a constant potential left `λ` undetermined and 0 was chosen.
//
// # Safety
// `sol` must be null or live.
bool maxent_solution_degenerate(const struct MaxentSolution *sol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXENT_H */
