#ifndef CUBE_SPECTRA_H
#define CUBE_SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>
#include <stddef.h>

/**
 * Result code of every fallible call.
 */
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_ARGUMENT = 2,
  CS_STATUS_OUT_OF_RANGE = 3,
  CS_STATUS_UNDEFINED = 4,
  CS_STATUS_INTERNAL = 5,
} CsStatus;

typedef enum CsRegime {
  CS_REGIME_CASE1 = 1,
  CS_REGIME_CASE2 = 2,
  CS_REGIME_CASE3 = 3,
  CS_REGIME_CASE4 = 4,
} CsRegime;

/**
 * Opaque graph handle.
 */
typedef struct CsGraph CsGraph;

typedef struct CsSpectralResult {
  double lambda1;
  uint64_t iterations;
  double residual;
  bool converged;
} CsSpectralResult;

typedef struct CsBoundReport {
  double sqrt_max_degree;
  double avg_degree;
  double max_degree_bound;
  double sqrt_edges;
  double walk2_bound;
  double parity_product_bound;
  double prediction;
} CsBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *cs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cs_version(void);

/**
 * Samples `G(Qⁿ, p)` for `(master_seed, trial)`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CsStatus cs_graph_sample(uint32_t n,
                              double p,
                              uint64_t master_seed,
                              uint64_t trial,
                              struct CsGraph **out);

/**
 * The full cube Qⁿ.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CsStatus cs_graph_full_cube(uint32_t n, struct CsGraph **out);

/**
 * Graph from `num_edges` pairs stored flat in `edges` as
 * `v0, w0, v1, w1, …`, each with `v < w`, sorted and without duplicates.
 *
 * # Safety
 * `edges` must point to `2 * num_edges` readable values (or may be null
 * when `num_edges` is 0); `out` must be valid for a write.
 */
enum CsStatus cs_graph_from_edges(uint32_t n,
                                  const uint64_t *edges,
                                  uintptr_t num_edges,
                                  struct CsGraph **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void cs_graph_free(struct CsGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` valid for a write.
 */
enum CsStatus cs_graph_n(const struct CsGraph *g, uint32_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` valid for a write.
 */
enum CsStatus cs_graph_edge_count(const struct CsGraph *g, uint64_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` valid for a write.
 */
enum CsStatus cs_graph_max_degree(const struct CsGraph *g, uint32_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` valid for a write.
 */
enum CsStatus cs_graph_degree(const struct CsGraph *g, uint64_t v, uint32_t *out);

/**
 * Largest eigenvalue by Lanczos. `tol <= 0` or `max_iter == 0` select the
 * defaults. Non-convergence is reported in `out->converged`, not as an
 * error.
 *
 * # Safety
 * `g` must be a live handle and `out` valid for a write.
 */
enum CsStatus cs_lambda1(const struct CsGraph *g,
                         double tol,
                         uint64_t max_iter,
                         struct CsSpectralResult *out);

/**
 * Eigenvalue bounds; `p` enters only the prediction `max(√Δ, np)`.
 *
 * # Safety
 * `g` must be a live handle and `out` valid for a write.
 */
enum CsStatus cs_bounds(const struct CsGraph *g, double p, struct CsBoundReport *out);

/**
 * κ(n) for edge probability `p`; `CS_STATUS_UNDEFINED` when no `k`
 * qualifies.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CsStatus cs_kappa(uint32_t n, double p, uint32_t *out);

/**
 * Expected number of vertices with degree at least `k`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CsStatus cs_expected_exceed_count(uint32_t n, double p, uint32_t k, double *out);

/**
 * Constant-`p` maximum-degree coefficient.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CsStatus cs_constant_p_coefficient(double p, double *out);

/**
 * Probability regime of `(n, p)`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CsStatus cs_classify_regime(uint32_t n, double p, enum CsRegime *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBE_SPECTRA_H */
