#ifndef LSK_H
#define LSK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Constructions accepted by [`lsk_patch_construct`].
 */
typedef enum LskConstruction {
  LSK_CONSTRUCTION_REVOLUTION = 0,
  LSK_CONSTRUCTION_TUBE = 1,
  LSK_CONSTRUCTION_CYLINDER = 2,
} LskConstruction;

/**
 * Status codes.
 */
typedef enum LskStatus {
  LSK_STATUS_OK = 0,
  LSK_STATUS_NULL_POINTER = 1,
  LSK_STATUS_INVALID_ARGUMENT = 2,
  LSK_STATUS_DIMENSION_MISMATCH = 3,
  LSK_STATUS_UNKNOWN_GENERATOR = 4,
  LSK_STATUS_NUMERICAL = 5,
  LSK_STATUS_PANIC = 6,
} LskStatus;

/**
 * Opaque patch handle.
 */
typedef struct LskPatch LskPatch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *lsk_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on this thread.
 */
const char *lsk_last_error(void);

/**
 * `⟨x, y⟩` for the form `diag(−1, 1, …, 1, −1)` on vectors of length `len ≥ 5`.
 *
 * # Safety
 * `x` and `y` must point to `len` doubles and `result` to one double.
 */
enum LskStatus lsk_inner(const double *x, const double *y, size_t len, double *result);

/**
 * Whether the `dim × dim` matrix preserves the form within `tol`.
 *
 * # Safety
 * `matrix` must point to `dim * dim` doubles and `result` to one bool.
 */
enum LskStatus lsk_is_lie_transform(const double *matrix, size_t dim, double tol, bool *result);

/**
 * Random element of `O(n+1, 2)`, written row-major into `matrix`, which must
 * hold `(n+3)²` doubles (`len`).
 *
 * # Safety
 * `matrix` must point to `len` writable doubles.
 */
enum LskStatus lsk_random_lie_transform(uint64_t seed,
                                        size_t n,
                                        double magnitude,
                                        double *matrix,
                                        size_t len);

/**
 * Canonical Lie curvature of four curvatures `(r[i] : s[i])` with
 * multiplicities. Writes the cross-ratio, the chosen ordering and whether it
 * is canonical.
 *
 * # Safety
 * Array arguments must hold four elements; outputs must be writable.
 */
enum LskStatus lsk_lie_curvature(const double *r,
                                 const double *s,
                                 const size_t *multiplicities,
                                 double *result,
                                 size_t *ordering,
                                 bool *canonical);

/**
 * Builds a named patch from `count` parameter keys and values.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `keys` an array of `count` such
 * strings and `values` an array of `count` doubles; `patch` must be writable.
 */
enum LskStatus lsk_patch_new(const char *name,
                             const char *const *keys,
                             const double *values,
                             size_t count,
                             struct LskPatch **patch);

/**
 * Applies a construction to a generated profile. `fiber_dim` is `m` for a
 * revolution and `k` otherwise; `eps` is the tube radius and ignored for the
 * other kinds. The profile handle stays owned by the caller.
 *
 * # Safety
 * `profile` must be a live handle and `patch` writable.
 */
enum LskStatus lsk_patch_construct(const struct LskPatch *profile,
                                   enum LskConstruction kind,
                                   size_t fiber_dim,
                                   double eps,
                                   struct LskPatch **patch);

/**
 * Releases a patch handle; null is ignored.
 *
 * # Safety
 * `patch` must come from this library and not be used afterwards.
 */
void lsk_patch_free(struct LskPatch *patch);

/**
 * Number of patch parameters.
 *
 * # Safety
 * `patch` must be a live handle and `result` writable.
 */
enum LskStatus lsk_patch_param_dim(const struct LskPatch *patch, size_t *result);

/**
 * Length of position and normal vectors of the patch.
 *
 * # Safety
 * `patch` must be a live handle and `result` writable.
 */
enum LskStatus lsk_patch_position_len(const struct LskPatch *patch, size_t *result);

/**
 * Position and unit normal at `u`. `position` and `normal` hold `len`
 * doubles each, which must equal [`lsk_patch_position_len`].
 *
 * # Safety
 * `u` must hold the parameter dimension of doubles; outputs `len` each.
 */
enum LskStatus lsk_patch_eval(const struct LskPatch *patch,
                              const double *u,
                              size_t u_len,
                              double *position,
                              double *normal,
                              size_t len);

/**
 * Analysis report as JSON. `grid` holds samples per axis (`grid_len` may be 0
 * for the default resolution). Free the string with [`lsk_string_free`].
 *
 * # Safety
 * `patch` must be a live handle, `grid` hold `grid_len` values, `json` writable.
 */
enum LskStatus lsk_patch_analyze(const struct LskPatch *patch,
                                 const size_t *grid,
                                 size_t grid_len,
                                 uint64_t seed,
                                 char **json);

/**
 * Classification report as JSON; `immersion` enables the immersing-transform
 * search. Free the string with [`lsk_string_free`].
 *
 * # Safety
 * As for [`lsk_patch_analyze`].
 */
enum LskStatus lsk_patch_classify(const struct LskPatch *patch,
                                  const size_t *grid,
                                  size_t grid_len,
                                  uint64_t seed,
                                  bool immersion,
                                  char **json);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void lsk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSK_H */
