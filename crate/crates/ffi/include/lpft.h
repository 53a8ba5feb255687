#ifndef LPFT_H
#define LPFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every exported function.
 */
typedef enum LpftStatus {
  LPFT_STATUS_OK = 0,
  /**
   * A value was written but its error estimate misses the tolerance.
   */
  LPFT_STATUS_NOT_CONVERGED = 1,
  LPFT_STATUS_INVALID_ARGUMENT = 2,
  LPFT_STATUS_HYPOTHESIS_VIOLATION = 3,
  LPFT_STATUS_SIDES_DISAGREE = 4,
  LPFT_STATUS_NO_CONVERGENCE = 5,
  LPFT_STATUS_INTEGRATION_FAILED = 6,
  LPFT_STATUS_PARSE_ERROR = 7,
  LPFT_STATUS_UNKNOWN_FUNCTION = 8,
  LPFT_STATUS_IO_ERROR = 9,
  LPFT_STATUS_NULL_POINTER = 10,
  LPFT_STATUS_PANIC = 11,
} LpftStatus;

/**
 * A real function of one variable.
 */
typedef struct LpftFunction LpftFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a handle for a corpus function or an expression from the
 * closed grammar. `tail` names the tail class of expressions that are not
 * compactly supported and may be null.
 *
 * # Safety
 * `spec` and `tail` must be null or NUL-terminated strings; `out` must be
 * valid for a write.
 */
enum LpftStatus lpft_function_new(const char *spec, const char *tail, struct LpftFunction **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `f` must be null or a handle from [`lpft_function_new`] not yet freed.
 */
void lpft_function_free(struct LpftFunction *f);

/**
 * Evaluates f at x.
 *
 * # Safety
 * `f` must be a live handle and `out` valid for a write.
 */
enum LpftStatus lpft_function_eval(const struct LpftFunction *f, double x, double *out);

/**
 * ∫_lo^hi f with infinite endpoints allowed (pass ±INFINITY).
 *
 * # Safety
 * `f` must be a live handle; `value` and `abs_err` valid for writes.
 */
enum LpftStatus lpft_integrate(const struct LpftFunction *f,
                               double lo,
                               double hi,
                               double tol,
                               double *value,
                               double *abs_err);

/**
 * f^(y) = ∫ f(x) e^{-2 pi i y x} dx.
 *
 * # Safety
 * `f` must be a live handle; `re`, `im` and `abs_err` valid for writes.
 */
enum LpftStatus lpft_fourier_transform(const struct LpftFunction *f,
                                       double y,
                                       double tol,
                                       double *re,
                                       double *im,
                                       double *abs_err);

/**
 * Laplace continuity value (order 0) or Laplace derivative (order 1) at
 * x, with mean half-width `delta` and the default s ladder.
 *
 * # Safety
 * `f` must be a live handle and `out` valid for a write.
 */
enum LpftStatus lpft_laplace_derivative(const struct LpftFunction *f,
                                        uint32_t order,
                                        double x,
                                        double delta,
                                        double tol,
                                        double *out);

/**
 * (f*g)(x).
 *
 * # Safety
 * `f` and `g` must be live handles; `value` and `abs_err` valid for writes.
 */
enum LpftStatus lpft_convolve(const struct LpftFunction *f,
                              const struct LpftFunction *g,
                              double x,
                              double tol,
                              double *value,
                              double *abs_err);

/**
 * Gaussian summability inversion of the transform of f at x, along the
 * default λ ladder.
 *
 * # Safety
 * `f` must be a live handle and `out` valid for a write.
 */
enum LpftStatus lpft_invert(const struct LpftFunction *f, double x, double tol, double *out);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *lpft_last_error(void);

/**
 * Static name of a status code.
 */
const char *lpft_status_name(enum LpftStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPFT_H */
