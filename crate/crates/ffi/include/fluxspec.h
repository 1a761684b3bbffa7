#ifndef FLUXSPEC_H
#define FLUXSPEC_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FsStatus {
  FS_STATUS_OK = 0,
  FS_STATUS_NULL_POINTER = 1,
  FS_STATUS_INVALID_ARGUMENT = 2,
  FS_STATUS_DIVERGENT = 3,
  FS_STATUS_OUT_OF_RANGE = 4,
  FS_STATUS_NON_INTEGER_FLUX = 5,
  FS_STATUS_SECTOR_MISMATCH = 6,
  FS_STATUS_NOT_A_FAMILY_MODE = 7,
  FS_STATUS_NUMERICAL = 8,
  FS_STATUS_INTERNAL = 9,
  FS_STATUS_PANIC = 10,
} FsStatus;

typedef enum FsFamily {
  FS_FAMILY_PLAIN = 0,
  FS_FAMILY_TILDE = 1,
} FsFamily;

typedef enum FsNormClass {
  FS_NORM_CLASS_REGULAR = 0,
  FS_NORM_CLASS_SECTION = 1,
  FS_NORM_CLASS_SINGULAR_NORMALIZABLE = 2,
  FS_NORM_CLASS_NON_NORMALIZABLE = 3,
} FsNormClass;

/**
 * Opaque eigenmode handle.
 */
typedef struct FsMode FsMode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Closed-form family mode at flux `q` in sector `f` (0 or 1).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum FsStatus fs_mode_new(double q,
                          uint8_t f,
                          enum FsFamily family,
                          int64_t m,
                          uintptr_t n,
                          struct FsMode **out);

/**
 * Regular monopole harmonic at integer flux, addressed by Jacobi degree.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum FsStatus fs_monopole_harmonic(int64_t q,
                                   uint8_t f,
                                   int64_t m,
                                   uintptr_t degree,
                                   struct FsMode **out);

/**
 * Releases a handle. Null is accepted.
 *
 * # Safety
 * `mode` must be null or a handle returned by this library and not yet freed.
 */
void fs_mode_free(struct FsMode *mode);

/**
 * # Safety
 * `mode` must be a live handle and `out` writable.
 */
enum FsStatus fs_mode_eigenvalue(const struct FsMode *mode, double *out);

/**
 * Exponent of the `1 + z` factor governing behaviour at the puncture.
 *
 * # Safety
 * `mode` must be a live handle and `out` writable.
 */
enum FsStatus fs_mode_gamma(const struct FsMode *mode, double *out);

/**
 * # Safety
 * `mode` must be a live handle and `out` writable.
 */
enum FsStatus fs_mode_class(const struct FsMode *mode, enum FsNormClass *out);

/**
 * Angular quantum number and sector of the mode.
 *
 * # Safety
 * `mode` must be a live handle; `m` and `f` writable.
 */
enum FsStatus fs_mode_labels(const struct FsMode *mode, int64_t *m, uint8_t *f);

/**
 * Value of the mode at `z = cos(theta)`, azimuth `phi`.
 *
 * # Safety
 * `mode` must be a live handle; `re` and `im` writable.
 */
enum FsStatus fs_mode_evaluate(const struct FsMode *mode,
                               double z,
                               double phi,
                               double *re,
                               double *im);

/**
 * Supercharge image: `Q` on sector 0, `Qbar` on sector 1. A zero mode yields
 * a handle whose coefficient is zero.
 *
 * # Safety
 * `mode` must be a live handle and `out` writable.
 */
enum FsStatus fs_mode_apply_supercharge(const struct FsMode *mode, struct FsMode **out);

/**
 * Whether the handle holds the zero function.
 *
 * # Safety
 * `mode` must be a live handle and `out` writable.
 */
enum FsStatus fs_mode_is_zero(const struct FsMode *mode, bool *out);

/**
 * Jacobi polynomial `P_n^{(alpha, beta)}(z)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FsStatus fs_jacobi_eval(uintptr_t n, double alpha, double beta, double z, double *out);

/**
 * `<a, b>` with `npoints` Gauss-Jacobi nodes.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum FsStatus fs_inner_product(const struct FsMode *a,
                               const struct FsMode *b,
                               uintptr_t npoints,
                               double *out);

/**
 * `<a, H b> - <H a, b>`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum FsStatus fs_hermiticity_defect(const struct FsMode *a,
                                    const struct FsMode *b,
                                    uintptr_t npoints,
                                    double *out);

/**
 * Zero-mode index at integer flux.
 *
 * # Safety
 * `out` must be writable.
 */
enum FsStatus fs_witten_index(double q, int64_t *out);

/**
 * Total flux of the gauge field divided by `2 pi`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FsStatus fs_flux_integral(double q, uintptr_t npoints, double *out);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *fs_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLUXSPEC_H */
