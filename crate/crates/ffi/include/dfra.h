#ifndef DFRA_H
#define DFRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DfraStatus {
  DFRA_STATUS_OK = 0,
  DFRA_STATUS_NULL_POINTER = 1,
  DFRA_STATUS_INVALID_ARGUMENT = 2,
  DFRA_STATUS_PARSE_ERROR = 3,
  DFRA_STATUS_UNKNOWN_GENERATOR = 4,
  DFRA_STATUS_POLE = 5,
  DFRA_STATUS_TACHYONIC = 6,
  DFRA_STATUS_NUMERICAL = 7,
  DFRA_STATUS_BUFFER_TOO_SMALL = 8,
  DFRA_STATUS_INVALID_UTF8 = 9,
  DFRA_STATUS_PANIC = 10,
} DfraStatus;

/**
 * Opaque handle to a commutator algebra.
 */
typedef struct DfraAlgebra DfraAlgebra;

/**
 * Opaque handle to the 10 gamma matrices of size 32x32.
 */
typedef struct DfraGammaSet DfraGammaSet;

/**
 * Parameters of the two-sector oscillator.
 */
typedef struct DfraOscillatorConfig {
  double m;
  double omega;
  /**
   * Theta-sector stiffness.
   */
  double lambda;
  double big_omega;
  uint32_t d;
} DfraOscillatorConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after success.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *dfra_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dfra_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void dfra_string_free(char *s);

/**
 * Builds the commutator algebra in `d` dimensions (`d + 1` with a time index
 * when `relativistic`).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DfraStatus dfra_algebra_new(uint32_t d, bool relativistic, struct DfraAlgebra **out);

/**
 * # Safety
 * `alg` must be null or a handle from [`dfra_algebra_new`], freed once.
 */
void dfra_algebra_free(struct DfraAlgebra *alg);

/**
 * Parses `src` (brackets written `[a, b]`) and writes its normal form.
 *
 * # Safety
 * `alg` must be a live handle, `src` a NUL-terminated string and `out` valid.
 */
enum DfraStatus dfra_algebra_eval(const struct DfraAlgebra *alg, const char *src, char **out);

/**
 * Counts generator triples whose Jacobi sum fails to vanish.
 *
 * # Safety
 * `alg` must be a live handle and `out` valid.
 */
enum DfraStatus dfra_algebra_jacobi_failures(const struct DfraAlgebra *alg, size_t *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum DfraStatus dfra_gammas_new(struct DfraGammaSet **out);

/**
 * # Safety
 * `gs` must be null or a handle from [`dfra_gammas_new`], freed once.
 */
void dfra_gammas_free(struct DfraGammaSet *gs);

/**
 * Copies gamma matrix `index` (0..10: four vectors, then the six pairs
 * 01, 02, 03, 12, 13, 23) row-major into `re` and `im`, each of length
 * `len >= 1024`.
 *
 * # Safety
 * `gs` must be a live handle; `re` and `im` must hold `len` doubles.
 */
enum DfraStatus dfra_gamma_matrix(const struct DfraGammaSet *gs,
                                  uint32_t index,
                                  double *re,
                                  double *im,
                                  size_t len);

/**
 * Largest entry of `{G^A, G^B} + 2 eta^AB` over all index pairs.
 *
 * # Safety
 * `gs` must be a live handle and `out` valid.
 */
enum DfraStatus dfra_gammas_clifford_residual(const struct DfraGammaSet *gs, double *out);

/**
 * On-shell frequency for spatial momentum `k[3]` and pair momentum `k2[16]`
 * (row-major, antisymmetric, upper indices).
 *
 * # Safety
 * `k` must hold 3 doubles, `k2` 16, and `out` must be valid.
 */
enum DfraStatus dfra_dispersion(const double *k,
                                const double *k2,
                                double lambda,
                                double m,
                                double *out);

/**
 * Momentum-space propagator `-1 / (K^2 + m^2 - i eps)`; pass `eps <= 0`
 * for no regulator.
 *
 * # Safety
 * `k1` must hold 4 doubles, `k2` 16, and both outputs must be valid.
 */
enum DfraStatus dfra_propagator(const double *k1,
                                const double *k2,
                                double lambda,
                                double m,
                                double eps,
                                double *out_re,
                                double *out_im);

/**
 * Energy of the occupation `(n_x[d], n_theta[d(d-1)/2])`.
 *
 * # Safety
 * The arrays must hold `nx_len` and `nth_len` entries; `out` must be valid.
 */
enum DfraStatus dfra_oscillator_energy(struct DfraOscillatorConfig cfg,
                                       const uint32_t *n_x,
                                       size_t nx_len,
                                       const uint32_t *n_theta,
                                       size_t nth_len,
                                       double *out);

/**
 * Ground-state `<theta^2>`.
 *
 * # Safety
 * `out` must be valid.
 */
enum DfraStatus dfra_oscillator_theta2(struct DfraOscillatorConfig cfg, double *out);

/**
 * Ground-state `<theta_a theta_b>` for canonical component slots `a`, `b`.
 *
 * # Safety
 * `out` must be valid.
 */
enum DfraStatus dfra_oscillator_pair_moment(struct DfraOscillatorConfig cfg,
                                            uint32_t a,
                                            uint32_t b,
                                            double *out);

/**
 * The 11x11 matrix of the element `(Lambda[16], A[4], B[16])`, row-major
 * into `out[121]`.
 *
 * # Safety
 * Inputs must hold 16, 4 and 16 doubles; `out` must hold 121.
 */
enum DfraStatus dfra_d5(const double *lambda, const double *a, const double *b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DFRA_H */
