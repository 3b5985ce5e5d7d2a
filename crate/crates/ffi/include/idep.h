/* Generated from src/lib.rs by cbindgen. Do not edit. */

#ifndef IDEP_H
#define IDEP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Values accepted by the `beta` argument of the potential constructors.
 */
typedef enum IdepBetaVariant {
  IDEP_BETA_VARIANT_DIMENSION_CORRECTED = 0,
  IDEP_BETA_VARIANT_AS_PRINTED = 1,
} IdepBetaVariant;

/**
 * Values accepted by the `variant` argument of [`idep_momentum_eigenvalue`].
 */
typedef enum IdepEigenvalueVariant {
  IDEP_EIGENVALUE_VARIANT_QUANTIZATION_ROOT = 0,
  IDEP_EIGENVALUE_VARIANT_BETA_TIMES_A = 1,
  IDEP_EIGENVALUE_VARIANT_AS_PRINTED_EQ22 = 2,
} IdepEigenvalueVariant;

typedef enum IdepStatus {
  IDEP_STATUS_OK = 0,
  IDEP_STATUS_NULL_POINTER = 1,
  IDEP_STATUS_INVALID_ARGUMENT = 2,
  IDEP_STATUS_UNKNOWN_MOLECULE = 3,
  /**
   * A numerical procedure failed (pole, singularity, no root, ...).
   */
  IDEP_STATUS_NUMERICAL = 4,
  /**
   * The level has no admissible eigenvalue under the chosen variant.
   */
  IDEP_STATUS_EXCLUDED = 5,
  IDEP_STATUS_PANIC = 6,
} IdepStatus;

/**
 * A molecule together with α and the β convention.
 */
typedef struct IdepPotential IdepPotential;

/**
 * Physical constants; see `idep_units_default` and `idep_units_new`.
 */
typedef struct IdepUnits IdepUnits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *idep_last_error_message(void);

/**
 * Static NUL-terminated version string.
 */
const char *idep_version(void);

/**
 * Library default constants. Never null.
 */
struct IdepUnits *idep_units_default(void);

/**
 * ħ in eV·ns and the amu rest energy in eV.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum IdepStatus idep_units_new(double hbar_ev_ns, double amu_to_ev_per_c2, struct IdepUnits **out);

/**
 * # Safety
 * `units` must be null or a handle not yet freed.
 */
void idep_units_free(struct IdepUnits *units);

/**
 * Potential for a molecule of the built-in registry (case-insensitive name).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum IdepStatus idep_potential_from_registry(const char *name,
                                             double alpha,
                                             int32_t beta,
                                             struct IdepPotential **out);

/**
 * Potential from explicit parameters: `de` in eV, `te` and `t0` in ns, `mu`
 * in amu, `alpha` in 1/ns.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum IdepStatus idep_potential_new(double de,
                                   double te,
                                   double mu,
                                   double t0,
                                   double q,
                                   double alpha,
                                   int32_t beta,
                                   struct IdepPotential **out);

/**
 * # Safety
 * `potential` must be null or a handle not yet freed.
 */
void idep_potential_free(struct IdepPotential *potential);

/**
 * V(t) in eV.
 *
 * # Safety
 * `potential` must be a live handle; `out` must be valid for writes.
 */
enum IdepStatus idep_potential_evaluate(const struct IdepPotential *potential,
                                        double t,
                                        double *out);

/**
 * cP_n in eV. `units` may be null for the defaults. Returns
 * `IDEP_STATUS_EXCLUDED` when the level has no admissible value.
 *
 * # Safety
 * `potential` must be a live handle, `units` null or live, `out` valid for
 * writes.
 */
enum IdepStatus idep_momentum_eigenvalue(const struct IdepPotential *potential,
                                         const struct IdepUnits *units,
                                         size_t n,
                                         int32_t variant,
                                         double *out);

/**
 * Lowest `count` finite-difference eigenvalues in eV on the default grid,
 * written to `out[0..count]`.
 *
 * # Safety
 * `potential` must be a live handle, `units` null or live, and `out` valid
 * for `count` writes.
 */
enum IdepStatus idep_grid_spectrum(const struct IdepPotential *potential,
                                   const struct IdepUnits *units,
                                   size_t count,
                                   double *out);

/**
 * Jacobi polynomial P_n^{(a,b)}(x); requires a, b > -1.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum IdepStatus idep_jacobi(size_t n, double a, double b, double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDEP_H */
