/* C interface to the spinscale library. */

#ifndef SPINSCALE_H
#define SPINSCALE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum SpinscaleStatus {
  SPINSCALE_STATUS_OK = 0,
  SPINSCALE_STATUS_INVALID_ARGUMENT = 1,
  SPINSCALE_STATUS_NULL_POINTER = 2,
  SPINSCALE_STATUS_DIMENSION_MISMATCH = 3,
  SPINSCALE_STATUS_NOT_HERMITIAN = 4,
  SPINSCALE_STATUS_NO_CONVERGENCE = 5,
  /**
   * A search finished without a result.
   */
  SPINSCALE_STATUS_NOT_FOUND = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  SPINSCALE_STATUS_PANIC = 7,
} SpinscaleStatus;

/**
 * Property selector for boundary searches.
 */
typedef enum SpinscaleProperty {
  SPINSCALE_PROPERTY_POS = 0,
  SPINSCALE_PROPERTY_CP = 1,
  SPINSCALE_PROPERTY_PPT = 2,
  SPINSCALE_PROPERTY_PHI2_CP = 3,
  SPINSCALE_PROPERTY_PHI2_PPT = 4,
} SpinscaleProperty;

/**
 * Opaque polarization-scaling map.
 */
typedef struct SpinscaleMap SpinscaleMap;

/**
 * Opaque square complex matrix.
 */
typedef struct SpinscaleMatrix SpinscaleMatrix;

/**
 * Classification results, filled by [`spinscale_map_classify`].
 */
typedef struct SpinscaleReport {
  uint32_t two_j;
  double lambda[3];
  bool positive_sufficient;
  bool positive_necessary;
  bool positive_exact;
  bool cp;
  /**
   * Choi matrix and its partial transpose both PSD.
   */
  bool ppt;
  bool phi2_cp;
  bool phi2_ppt;
  double min_positivity_eig;
  double min_choi_eig;
  double min_ptchoi_eig;
  double min_phi2_choi_eig;
  double min_phi2_ptchoi_eig;
  double tol;
} SpinscaleReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *spinscale_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spinscale_version(void);

/**
 * Creates the map with spin `two_j / 2` and scaling parameters `l1, l2, l3`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SpinscaleStatus spinscale_map_new(uint32_t two_j,
                                       double lambda1,
                                       double lambda2,
                                       double lambda3,
                                       struct SpinscaleMap **out);

/**
 * Releases a map. Null is ignored.
 *
 * # Safety
 * `map` must come from [`spinscale_map_new`] and not be used afterwards.
 */
void spinscale_map_free(struct SpinscaleMap *map);

/**
 * Hilbert-space dimension `2j + 1` of the map, or 0 for null.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
size_t spinscale_map_dim(const struct SpinscaleMap *map);

/**
 * Classifies the map at PSD tolerance `tol`.
 *
 * # Safety
 * `map` must be a live handle and `out` valid for writes.
 */
enum SpinscaleStatus spinscale_map_classify(const struct SpinscaleMap *map,
                                            double tol,
                                            struct SpinscaleReport *out);

/**
 * Choi matrix of the map, or its partial transpose on the second factor.
 *
 * # Safety
 * `map` must be a live handle and `out` valid for writes.
 */
enum SpinscaleStatus spinscale_map_choi(const struct SpinscaleMap *map,
                                        bool partial_transpose,
                                        struct SpinscaleMatrix **out);

/**
 * Applies the map to `x`, which must have dimension `2j + 1`.
 *
 * # Safety
 * `map` and `x` must be live handles and `out` valid for writes.
 */
enum SpinscaleStatus spinscale_map_apply(const struct SpinscaleMap *map,
                                         const struct SpinscaleMatrix *x,
                                         struct SpinscaleMatrix **out);

/**
 * Builds a `dim x dim` matrix from row-major real and imaginary parts.
 * `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `dim * dim` readable doubles;
 * `out` must be valid for writes.
 */
enum SpinscaleStatus spinscale_matrix_from_parts(size_t dim,
                                                 const double *re,
                                                 const double *im,
                                                 struct SpinscaleMatrix **out);

/**
 * Releases a matrix. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void spinscale_matrix_free(struct SpinscaleMatrix *m);

/**
 * Matrix dimension, or 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t spinscale_matrix_dim(const struct SpinscaleMatrix *m);

/**
 * Reads entry `(row, col)`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` valid for writes.
 */
enum SpinscaleStatus spinscale_matrix_get(const struct SpinscaleMatrix *m,
                                          size_t row,
                                          size_t col,
                                          double *re,
                                          double *im);

/**
 * Smallest eigenvalue of a Hermitian matrix.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum SpinscaleStatus spinscale_matrix_min_eig(const struct SpinscaleMatrix *m, double *out);

/**
 * Serializes the matrix as `{"dim":n,"re":[[..]],"im":[[..]]}`.
 * Release the string with [`spinscale_string_free`].
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum SpinscaleStatus spinscale_matrix_to_json(const struct SpinscaleMatrix *m, char **out);

/**
 * Parses the JSON produced by [`spinscale_matrix_to_json`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum SpinscaleStatus spinscale_matrix_from_json(const char *json, struct SpinscaleMatrix **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void spinscale_string_free(char *s);

/**
 * Radius at which `property` first fails along the ray through `direction`.
 *
 * # Safety
 * `direction` must point to 3 readable doubles and `out` be valid for writes.
 */
enum SpinscaleStatus spinscale_boundary_radius(uint32_t two_j,
                                               const double *direction,
                                               enum SpinscaleProperty property,
                                               double tol,
                                               double *out);

/**
 * Grid plus random search for a map whose square is CP while its tensor
 * square is not positive on the canonical Schmidt-rank-2 state.
 * Returns `SPINSCALE_STATUS_NOT_FOUND` when the search is exhausted.
 *
 * # Safety
 * `lambda_out` must point to 3 writable doubles; `phi2_choi_min_eig` and
 * `witness` must be valid for writes.
 */
enum SpinscaleStatus spinscale_hunt(uint32_t two_j,
                                    size_t steps,
                                    uint64_t seed,
                                    double tol,
                                    double *lambda_out,
                                    double *phi2_choi_min_eig,
                                    double *witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINSCALE_H */
