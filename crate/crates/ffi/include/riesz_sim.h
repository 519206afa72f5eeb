#ifndef RIESZ_SIM_H
#define RIESZ_SIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of a call. Values match the error kinds of the library.
 */
typedef enum RzStatus {
  RZ_STATUS_OK = 0,
  RZ_STATUS_DOMAIN = 1,
  RZ_STATUS_INPUT = 2,
  RZ_STATUS_PARSE = 3,
  RZ_STATUS_SINGULARITY = 4,
  RZ_STATUS_DEGENERATE_SCALING = 5,
  RZ_STATUS_EXTRAPOLATION = 6,
  RZ_STATUS_PRECONDITION = 7,
  RZ_STATUS_IO = 8,
  RZ_STATUS_NULL_POINTER = 9,
  RZ_STATUS_PANIC = 10,
} RzStatus;

/**
 * Sampled complex field on a uniform grid.
 */
typedef struct RzField RzField;

/**
 * Similarity profile with its convergence estimate.
 */
typedef struct RzProfile RzProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread (empty after a
 * successful call). The pointer stays valid until the next call on the
 * same thread.
 */
const char *rz_last_error_message(void);

/**
 * Creates a field of `count` samples at `start + i * step` from separate
 * real and imaginary arrays.
 *
 * # Safety
 * `re` and `im` must point to `count` readable doubles; `out` must be
 * writable.
 */
enum RzStatus rz_field_new(double start,
                           double step,
                           uintptr_t count,
                           const double *re,
                           const double *im,
                           struct RzField **out);

/**
 * Releases a field. Null is ignored.
 *
 * # Safety
 * `field` must come from this library and not be used afterwards.
 */
void rz_field_free(struct RzField *field);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uintptr_t rz_field_len(const struct RzField *field);

/**
 * Grid parameters of a field.
 *
 * # Safety
 * `field` must be a live handle; the outputs must be writable.
 */
enum RzStatus rz_field_grid(const struct RzField *field,
                            double *start,
                            double *step,
                            uintptr_t *count);

/**
 * Copies the samples into `re` and `im`, which hold `len` doubles each;
 * `len` must equal the field length.
 *
 * # Safety
 * `field` must be a live handle; `re` and `im` must be writable for `len`
 * doubles.
 */
enum RzStatus rz_field_values(const struct RzField *field, double *re, double *im, uintptr_t len);

/**
 * Two-sided coefficient `1 / (2 cos(alpha pi / 2))`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RzStatus rz_riesz_coefficient(double alpha, double *out);

/**
 * Spectral Riesz derivative of a periodic field.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum RzStatus rz_riesz_spectral(const struct RzField *field, double alpha, struct RzField **out);

/**
 * Order-one Riesz derivative `d/dx H f` of a periodic field.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum RzStatus rz_riesz_order_one(const struct RzField *field, struct RzField **out);

/**
 * Hilbert transform of a periodic field.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum RzStatus rz_hilbert_transform(const struct RzField *field, struct RzField **out);

/**
 * Finite-domain Riesz derivative. `boundary_warning` (may be null) is set
 * when the field does not vanish at the interval ends.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum RzStatus rz_riesz_finite(const struct RzField *field,
                              double alpha,
                              struct RzField **out,
                              bool *boundary_warning);

/**
 * Fourier-space profile `Psi(omega)` with amplitude `i`.
 *
 * # Safety
 * `re` and `im` must be writable.
 */
enum RzStatus rz_fourier_profile(double omega,
                                 double alpha,
                                 double epsilon,
                                 double *re,
                                 double *im);

/**
 * Profile on `points` samples of `[v_min, v_max]` with default quadrature.
 *
 * # Safety
 * `out` must be writable.
 */
enum RzStatus rz_profile_evaluate(double alpha,
                                  double epsilon,
                                  double v_min,
                                  double v_max,
                                  uintptr_t points,
                                  struct RzProfile **out);

/**
 * Profile refined until its convergence estimate is below `tol` (or the
 * refinement cap is reached, see [`rz_profile_unconverged`]).
 *
 * # Safety
 * `out` must be writable.
 */
enum RzStatus rz_profile_refine(double alpha,
                                double epsilon,
                                double v_min,
                                double v_max,
                                uintptr_t points,
                                double tol,
                                struct RzProfile **out);

/**
 * Releases a profile. Null is ignored.
 *
 * # Safety
 * `profile` must come from this library and not be used afterwards.
 */
void rz_profile_free(struct RzProfile *profile);

/**
 * Convergence estimate, or NaN for a null handle.
 *
 * # Safety
 * `profile` must be null or a live handle.
 */
double rz_profile_convergence_estimate(const struct RzProfile *profile);

/**
 * Whether refinement stopped at the cap without reaching its target.
 *
 * # Safety
 * `profile` must be null or a live handle.
 */
bool rz_profile_unconverged(const struct RzProfile *profile);

/**
 * Copy of the profile samples as a new field handle.
 *
 * # Safety
 * `profile` must be a live handle; `out` must be writable.
 */
enum RzStatus rz_profile_field(const struct RzProfile *profile, struct RzField **out);

/**
 * Norms of the profile-equation residual of `field` read as `phi(v)`.
 * Any of the outputs may be null.
 *
 * # Safety
 * `field` must be a live handle.
 */
enum RzStatus rz_reduced_ode_residual(const struct RzField *field,
                                      double alpha,
                                      double epsilon,
                                      double *l2,
                                      double *linf,
                                      double *relative_linf);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RIESZ_SIM_H */
