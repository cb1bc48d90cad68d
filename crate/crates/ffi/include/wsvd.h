#ifndef WSVD_H
#define WSVD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsvdStatus {
  WSVD_STATUS_OK = 0,
  WSVD_STATUS_NULL_POINTER = 1,
  WSVD_STATUS_INVALID_ARGUMENT = 2,
  WSVD_STATUS_DUPLICATE_POINTS = 3,
  WSVD_STATUS_TOO_FEW_POINTS = 4,
  WSVD_STATUS_UNSUPPORTED_DOMAIN = 5,
  WSVD_STATUS_DEGENERATE_RULE = 6,
  WSVD_STATUS_EIGEN_FAILURE = 7,
  WSVD_STATUS_LENGTH_MISMATCH = 8,
  WSVD_STATUS_SINGULAR_MATRIX = 9,
  WSVD_STATUS_BUFFER_TOO_SMALL = 10,
  WSVD_STATUS_INTERNAL = 99,
} WsvdStatus;

// Approximant handle. Keeps its basis alive independently of the basis
// handle it was built from.
typedef struct WsvdApproximant WsvdApproximant;

// Weighted SVD basis handle.
typedef struct WsvdBasis WsvdBasis;

// Cubature rule handle.
typedef struct WsvdRule WsvdRule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *wsvd_last_error(void);

// Rule on a named domain (`square`, `disk`, `cutdisk`, `lens`) with about
// `budget` nodes. `kind` may be null for the domain's default rule.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum WsvdStatus wsvd_rule_new(const char *domain,
                              const char *kind,
                              size_t budget,
                              struct WsvdRule **out);

// Rule from explicit nodes and positive weights on a named domain.
//
// # Safety
// `xy` holds `2 * count` values and `weights` holds `count`.
enum WsvdStatus wsvd_rule_from_arrays(const char *domain,
                                      const double *xy,
                                      const double *weights,
                                      size_t count,
                                      struct WsvdRule **out);

// # Safety
// `rule` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_rule_len(const struct WsvdRule *rule, size_t *out);

// Copies `2 * len` interleaved coordinates into `xy`.
//
// # Safety
// `xy` must hold `capacity` values.
enum WsvdStatus wsvd_rule_nodes(const struct WsvdRule *rule, double *xy, size_t capacity);

// # Safety
// `weights` must hold `capacity` values.
enum WsvdStatus wsvd_rule_weights(const struct WsvdRule *rule, double *weights, size_t capacity);

// # Safety
// `rule` must come from this library and not be used afterwards. Null is
// ignored.
void wsvd_rule_free(struct WsvdRule *rule);

// Builds the basis for kernel `name` with shape parameter `eps` on `rule`.
// The rule handle stays owned by the caller.
//
// # Safety
// `kernel` must be NUL-terminated, `rule` live, `out` writable.
enum WsvdStatus wsvd_basis_new(const char *kernel,
                               double eps,
                               const struct WsvdRule *rule,
                               struct WsvdBasis **out);

// # Safety
// `basis` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_basis_len(const struct WsvdBasis *basis, size_t *out);

// Number of basis functions above the eigenvalue clamp.
//
// # Safety
// `basis` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_basis_active(const struct WsvdBasis *basis, size_t *out);

// Copies the `len` eigenvalues `σⱼ²`, descending.
//
// # Safety
// `sigma2` must hold `capacity` values.
enum WsvdStatus wsvd_basis_sigma2(const struct WsvdBasis *basis, double *sigma2, size_t capacity);

// Writes the `active` basis values `u_j(x, y)` into `values`.
//
// # Safety
// `values` must hold `capacity` values.
enum WsvdStatus wsvd_basis_eval(const struct WsvdBasis *basis,
                                double x,
                                double y,
                                double *values,
                                size_t capacity);

// Power function of the first `m` basis functions at `(x, y)`.
//
// # Safety
// `basis` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_basis_power_function(const struct WsvdBasis *basis,
                                          double x,
                                          double y,
                                          size_t m,
                                          double *out);

// # Safety
// `basis` must come from this library and not be used afterwards. Null is
// ignored. Approximants built from it remain valid.
void wsvd_basis_free(struct WsvdBasis *basis);

// Projects node samples (`len` values, in node order) onto the basis.
//
// # Safety
// `samples` must hold `count` values.
enum WsvdStatus wsvd_approx_project(const struct WsvdBasis *basis,
                                    const double *samples,
                                    size_t count,
                                    struct WsvdApproximant **out);

// New approximant keeping the first `m` terms (capped at the active count).
//
// # Safety
// `approx` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_approx_truncate_order(const struct WsvdApproximant *approx,
                                           size_t m,
                                           struct WsvdApproximant **out);

// New approximant keeping the terms with `σⱼ ≥ tol`.
//
// # Safety
// `approx` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_approx_truncate_tol(const struct WsvdApproximant *approx,
                                         double tol,
                                         struct WsvdApproximant **out);

// # Safety
// `approx` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_approx_terms(const struct WsvdApproximant *approx, size_t *out);

// # Safety
// `approx` must be a live handle; `out` must be writable.
enum WsvdStatus wsvd_approx_eval(const struct WsvdApproximant *approx,
                                 double x,
                                 double y,
                                 double *out);

// Evaluates at `count` points given as interleaved `xy`.
//
// # Safety
// `xy` holds `2 * count` values and `values` holds `count`.
enum WsvdStatus wsvd_approx_eval_many(const struct WsvdApproximant *approx,
                                      const double *xy,
                                      size_t count,
                                      double *values);

// # Safety
// `approx` must come from this library and not be used afterwards. Null
// is ignored.
void wsvd_approx_free(struct WsvdApproximant *approx);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WSVD_H */
