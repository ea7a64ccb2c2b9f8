#ifndef TILTED_ISING_H
#define TILTED_ISING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result code of every fallible call.
 */
typedef enum TiStatus {
  TI_STATUS_OK = 0,
  TI_STATUS_INVALID_INPUT = 1,
  TI_STATUS_UNFOLDING = 2,
  TI_STATUS_NUMERICAL = 3,
  TI_STATUS_RESOURCE = 4,
  TI_STATUS_NULL_POINTER = 5,
  TI_STATUS_BUFFER_TOO_SMALL = 6,
  TI_STATUS_PANIC = 7,
} TiStatus;

/**
 * Symmetry sector of the bit-reversal operator.
 */
typedef enum TiSector {
  TI_SECTOR_EVEN = 0,
  TI_SECTOR_ODD = 1,
  TI_SECTOR_FULL = 2,
} TiSector;

/**
 * Exact propagator `e^{-iHt}` of one Hamiltonian.
 */
typedef struct TiPropagator TiPropagator;

/**
 * Eigenvalues (and optionally eigenvectors) of one sector.
 */
typedef struct TiSpectrum TiSpectrum;

/**
 * A normalized pure state of a chain.
 */
typedef struct TiState TiState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ti_version(void);

/**
 * Copies the last error message of this thread into `buf` (truncated and
 * NUL-terminated) and returns the full message length, 0 if none.
 */
size_t ti_last_error(char *buf, size_t cap);

/**
 * Dense row-major Hamiltonian (`2^L × 2^L` values) into `out`.
 */
enum TiStatus ti_hamiltonian_dense(size_t len,
                                   double coupling,
                                   double field,
                                   double theta,
                                   double *out,
                                   size_t cap);

/**
 * Diagonalizes `H(len, coupling, field, theta)` in `sector`.
 */
enum TiStatus ti_spectrum_new(size_t len,
                              double coupling,
                              double field,
                              double theta,
                              enum TiSector sector,
                              bool want_vectors,
                              struct TiSpectrum **out);

/**
 * Number of levels, 0 for a null handle.
 */
size_t ti_spectrum_len(const struct TiSpectrum *spectrum);

/**
 * Ascending eigenvalues into `out`.
 */
enum TiStatus ti_spectrum_eigenvalues(const struct TiSpectrum *spectrum, double *out, size_t cap);

/**
 * Eigenstate `k` in full-space coordinates as a new state handle.
 */
enum TiStatus ti_spectrum_eigenstate(const struct TiSpectrum *spectrum,
                                     size_t k,
                                     struct TiState **out);

void ti_spectrum_free(struct TiSpectrum *spectrum);

/**
 * State from `2^len` real and imaginary parts; `im` may be null for a real
 * state. The amplitudes must be normalized.
 */
enum TiStatus ti_state_new(size_t len, const double *re, const double *im, struct TiState **out);

/**
 * `(|00⟩+|11⟩)/√2` on sites 1, 2 with all other spins down.
 */
enum TiStatus ti_state_bell_seed(size_t len, struct TiState **out);

/**
 * Number of amplitudes, 0 for a null handle.
 */
size_t ti_state_dim(const struct TiState *state);

/**
 * Real and imaginary parts of the amplitudes; either buffer may be null.
 */
enum TiStatus ti_state_amplitudes(const struct TiState *state, double *re, double *im, size_t cap);

void ti_state_free(struct TiState *state);

/**
 * Entanglement entropy (bits) of the leading `l` sites.
 */
enum TiStatus ti_entropy_block(const struct TiState *state, size_t l, double *out);

/**
 * Concurrence of sites `i < j` (1-based).
 */
enum TiStatus ti_pair_concurrence(const struct TiState *state, size_t i, size_t j, double *out);

/**
 * Meyer–Wallach Q.
 */
enum TiStatus ti_q_measure(const struct TiState *state, double *out);

/**
 * Sum of squared concurrences over all site pairs.
 */
enum TiStatus ti_total_tangle(const struct TiState *state, double *out);

/**
 * Log participation ratio and Shannon entropy (nats) in the computational basis.
 */
enum TiStatus ti_localization(const struct TiState *state, double *log_pr, double *shannon);

/**
 * Unfolds `n` ascending eigenvalues and writes the unfolded spacings;
 * `needed` receives their count.
 */
enum TiStatus ti_unfold_spacings(const double *eigenvalues,
                                 size_t n,
                                 size_t fit_degree,
                                 double trim_fraction,
                                 double *out,
                                 size_t cap,
                                 size_t *needed);

/**
 * KS distances of unit-mean spacings to the Poisson and Wigner laws.
 */
enum TiStatus ti_ks_statistic(const double *spacings,
                              size_t n,
                              double *d_poisson,
                              double *d_wigner);

/**
 * Diagonalizes the full Hamiltonian for time evolution.
 */
enum TiStatus ti_propagator_new(size_t len,
                                double coupling,
                                double field,
                                double theta,
                                struct TiPropagator **out);

/**
 * `e^{-iHt}|ψ⟩` as a new state handle.
 */
enum TiStatus ti_propagator_evolve(const struct TiPropagator *propagator,
                                   const struct TiState *state,
                                   double t,
                                   struct TiState **out);

void ti_propagator_free(struct TiPropagator *propagator);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TILTED_ISING_H */
