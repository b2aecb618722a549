#ifndef HBPS_H
#define HBPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which side of a wall a polarization on it is taken to lie on.
 */
typedef enum HbpsSide {
  HBPS_SIDE_MINUS = 0,
  HBPS_SIDE_EXACT = 1,
  HBPS_SIDE_PLUS = 2,
} HbpsSide;

/**
 * Outcome of a call.
 */
typedef enum HbpsStatus {
  HBPS_STATUS_OK = 0,
  HBPS_STATUS_NULL_POINTER = 1,
  HBPS_STATUS_INVALID_ARGUMENT = 2,
  HBPS_STATUS_LATTICE = 3,
  HBPS_STATUS_SERIES = 4,
  HBPS_STATUS_INVARIANT = 5,
  HBPS_STATUS_NUMERIC = 6,
  /**
   * An integer did not fit the requested C type; use the JSON accessors.
   */
  HBPS_STATUS_OVERFLOW = 7,
  HBPS_STATUS_PANIC = 8,
} HbpsStatus;

/**
 * `f_{r,c1}` or `h_{r,c1}`.
 */
typedef enum HbpsWhich {
  HBPS_WHICH_F = 0,
  HBPS_WHICH_H = 1,
} HbpsWhich;

/**
 * Betti numbers and Euler number of one moduli space.
 */
typedef struct HbpsRecord HbpsRecord;

/**
 * A truncated series in `q` with Laurent-polynomial coefficients in `w`.
 */
typedef struct HbpsSeries HbpsSeries;

/**
 * Real and imaginary part of a numeric value, with a bound on its truncation error.
 */
typedef struct HbpsComplex {
  double re;
  double im;
  double tail_bound;
} HbpsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *hbps_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hbps_version(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hbps_string_free(char *s);

/**
 * Generating function `f_{r,c1}` or `h_{r,c1}` on `Σ_ell` at `J = mC + (m·ell+n)f`
 * through `q^{qmax_num/qmax_den}`, with `c1 = b·C − a·f`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HbpsStatus hbps_generating_function(uint32_t ell,
                                         uint32_t rank,
                                         int64_t c1_b,
                                         int64_t c1_a,
                                         int64_t j_m,
                                         int64_t j_n,
                                         enum HbpsSide j_side,
                                         enum HbpsWhich which,
                                         int64_t qmax_num,
                                         int64_t qmax_den,
                                         struct HbpsSeries **out);

/**
 * Canonical JSON of a series; free the result with [`hbps_string_free`].
 *
 * # Safety
 * `series` must be a live handle and `out` valid for writes.
 */
enum HbpsStatus hbps_series_to_json(const struct HbpsSeries *series, char **out);

/**
 * Number of nonzero `q`-coefficients stored in the series.
 *
 * # Safety
 * `series` must be a live handle and `out` valid for writes.
 */
enum HbpsStatus hbps_series_term_count(const struct HbpsSeries *series, size_t *out);

/**
 * # Safety
 * `series` must come from this library and not have been freed. NULL is ignored.
 */
void hbps_series_free(struct HbpsSeries *series);

/**
 * Betti and Euler numbers of the moduli space of `(rank, b·C − a·f, c2)` on
 * `Σ_ell` at `J_{m,n}`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HbpsStatus hbps_record_new(uint32_t ell,
                                uint32_t rank,
                                int64_t c1_b,
                                int64_t c1_a,
                                int64_t c2,
                                int64_t j_m,
                                int64_t j_n,
                                enum HbpsSide j_side,
                                struct HbpsRecord **out);

/**
 * Complex dimension of the moduli space.
 *
 * # Safety
 * `record` must be a live handle and `out` valid for writes.
 */
enum HbpsStatus hbps_record_dim(const struct HbpsRecord *record, int64_t *out);

/**
 * Copy `b_0, …, b_{2·dim}` into `buf`. With `buf` NULL or `capacity` too
 * small, only `*len` is set (to the required length).
 *
 * # Safety
 * `record` must be a live handle, `len` valid for writes and `buf` valid for
 * `capacity` writes when non-NULL.
 */
enum HbpsStatus hbps_record_betti(const struct HbpsRecord *record,
                                  uint64_t *buf,
                                  size_t capacity,
                                  size_t *len);

/**
 * Euler number of the moduli space.
 *
 * # Safety
 * `record` must be a live handle and `out` valid for writes.
 */
enum HbpsStatus hbps_record_euler(const struct HbpsRecord *record, uint64_t *out);

/**
 * JSON `{ell, r, c1, c2, J, dim, betti, euler, warnings}`; free with [`hbps_string_free`].
 *
 * # Safety
 * `record` must be a live handle and `out` valid for writes.
 */
enum HbpsStatus hbps_record_to_json(const struct HbpsRecord *record, char **out);

/**
 * # Safety
 * `record` must come from this library and not have been freed. NULL is ignored.
 */
void hbps_record_free(struct HbpsRecord *record);

/**
 * Completed rank-2 generating function `f̂_{2,βC−αf}(z, τ)` at the real
 * polarization `J = mC + (m·ell+n)f`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HbpsStatus hbps_f2hat(uint32_t ell,
                           int64_t alpha,
                           int64_t beta,
                           double j_m,
                           double j_n,
                           double z_re,
                           double z_im,
                           double tau_re,
                           double tau_im,
                           struct HbpsComplex *out);

/**
 * Parse a C string argument; exposed for bindings that pass `m,n,side` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `m`, `n` and `side_out` valid for writes.
 */
enum HbpsStatus hbps_parse_polarization(const char *text,
                                        int64_t *m,
                                        int64_t *n,
                                        enum HbpsSide *side_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HBPS_H */
