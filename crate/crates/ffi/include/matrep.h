#ifndef MATREP_H
#define MATREP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Outcome of a bound check.
 */
typedef enum MatrepCheck {
  MATREP_CHECK_HOLDS = 0,
  MATREP_CHECK_FAILS = 1,
  MATREP_CHECK_INDETERMINATE = 2,
} MatrepCheck;

/**
 * Outcome of a representability search.
 */
typedef enum MatrepRepOutcome {
  MATREP_REP_OUTCOME_FOUND = 0,
  MATREP_REP_OUTCOME_NOT_REPRESENTABLE = 1,
  MATREP_REP_OUTCOME_BUDGET_EXCEEDED = 2,
} MatrepRepOutcome;

typedef enum MatrepStatus {
  MATREP_STATUS_OK = 0,
  MATREP_STATUS_NULL_POINTER = 1,
  MATREP_STATUS_INVALID_INPUT = 2,
  MATREP_STATUS_WIDTH_OVERFLOW = 3,
  MATREP_STATUS_DIMENSION_MISMATCH = 4,
  MATREP_STATUS_UNSUPPORTED_FIELD = 5,
  MATREP_STATUS_BUDGET_EXCEEDED = 6,
  MATREP_STATUS_PARSE = 7,
  MATREP_STATUS_PRECONDITION = 8,
  MATREP_STATUS_INTERNAL = 9,
  MATREP_STATUS_BUFFER_TOO_SMALL = 10,
  MATREP_STATUS_PANIC = 11,
} MatrepStatus;

/**
 * Opaque finite-field handle.
 */
typedef struct MatrepField MatrepField;

/**
 * Opaque matroid handle.
 */
typedef struct MatrepMatroid MatrepMatroid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to
 * fit) and returns its full length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t matrep_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *matrep_version(void);

/**
 * Builds a matroid from basis masks, validating the exchange axiom.
 *
 * # Safety
 * `masks` must be valid for `count` reads; `out` must be writable.
 */
enum MatrepStatus matrep_matroid_new(uint32_t n,
                                     const uint32_t *masks,
                                     size_t count,
                                     struct MatrepMatroid **out);

/**
 * The uniform matroid `U_{r,n}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MatrepStatus matrep_matroid_uniform(uint32_t r, uint32_t n, struct MatrepMatroid **out);

/**
 * Parses a census body line such as `1,2;1,3;2,3` over `[n]`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum MatrepStatus matrep_matroid_parse(const char *text, uint32_t n, struct MatrepMatroid **out);

/**
 * Releases a matroid handle. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void matrep_matroid_free(struct MatrepMatroid *m);

/**
 * Ground-set size, rank and number of bases.
 *
 * # Safety
 * `m` must be a live handle; each out pointer must be null or writable.
 */
enum MatrepStatus matrep_matroid_info(const struct MatrepMatroid *m,
                                      uint32_t *n,
                                      uint32_t *rank,
                                      size_t *num_bases);

/**
 * Copies the sorted basis masks into `buf`. `len_out` always receives the
 * number of bases; a short buffer yields `MATREP_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `buf` must be null or valid for `cap` writes; `len_out` must be writable.
 */
enum MatrepStatus matrep_matroid_bases(const struct MatrepMatroid *m,
                                       uint32_t *buf,
                                       size_t cap,
                                       size_t *len_out);

/**
 * Writes the census line of `m` (NUL-terminated) into `buf`; `len_out`
 * receives the length without terminator.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes; `len_out` must be writable.
 */
enum MatrepStatus matrep_matroid_format(const struct MatrepMatroid *m,
                                        char *buf,
                                        size_t cap,
                                        size_t *len_out);

/**
 * The dual matroid as a new handle.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum MatrepStatus matrep_matroid_dual(const struct MatrepMatroid *m, struct MatrepMatroid **out);

/**
 * The canonical representative (new handle) and automorphism group order.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable; `automorphisms` may be null.
 */
enum MatrepStatus matrep_matroid_canonical(const struct MatrepMatroid *m,
                                           struct MatrepMatroid **out,
                                           uint64_t *automorphisms);

/**
 * Whether two matroids are isomorphic.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum MatrepStatus matrep_matroid_isomorphic(const struct MatrepMatroid *a,
                                            const struct MatrepMatroid *b,
                                            bool *out);

/**
 * Whether the masks form the basis family of a matroid on `[n]`. An empty
 * family is not one.
 *
 * # Safety
 * `masks` must be valid for `count` reads; `out` must be writable.
 */
enum MatrepStatus matrep_check_exchange(uint32_t n, const uint32_t *masks, size_t count, bool *out);

/**
 * Creates GF(q) for a supported prime power `q <= 16`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MatrepStatus matrep_field_new(uint32_t q, struct MatrepField **out);

/**
 * Releases a field handle. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void matrep_field_free(struct MatrepField *f);

/**
 * Field order, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint32_t matrep_field_order(const struct MatrepField *f);

/**
 * Searches for a representation of `m` over `field`.
 *
 * When found, the `rank × n` matrix is written row-major into `matrix` as
 * field element indices; its columns realize exactly the bases of `m`.
 * `matrix` may be null to skip it, otherwise it needs `rank * n` entries.
 * A zero `budget` means the library default.
 *
 * # Safety
 * Handles must be live; `matrix` must be null or valid for `cap` writes;
 * `outcome` must be writable; `nodes` may be null.
 */
enum MatrepStatus matrep_find_representation(const struct MatrepMatroid *m,
                                             const struct MatrepField *field,
                                             uint64_t budget,
                                             bool row_normalization,
                                             enum MatrepRepOutcome *outcome,
                                             uint8_t *matrix,
                                             size_t cap,
                                             uint64_t *nodes);

/**
 * `log2 k(n, r)` rounded to double, with its error radius (may be null).
 *
 * # Safety
 * `value` must be writable; `radius` must be null or writable.
 */
enum MatrepStatus matrep_log2_k(uint64_t n, uint64_t r, double *value, double *radius);

/**
 * `log2 k'(n, r)`; `r = 0` is an error.
 *
 * # Safety
 * As for [`matrep_log2_k`].
 */
enum MatrepStatus matrep_log2_k_prime(uint64_t n, uint64_t r, double *value, double *radius);

/**
 * Exponent of the lower bound on the number of matroids on `[n]`.
 *
 * # Safety
 * As for [`matrep_log2_k`].
 */
enum MatrepStatus matrep_knuth_log2_lower(uint64_t n, double *value, double *radius);

/**
 * `log2` of the conjectured count of matroids on `[n]`.
 *
 * # Safety
 * As for [`matrep_log2_k`].
 */
enum MatrepStatus matrep_conjecture_log2_count(uint64_t n, double *value, double *radius);

/**
 * `d(n) = (⌊n/2⌋ - 1)(⌈n/2⌉ - 1)` for `n >= 2`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MatrepStatus matrep_d_of_n(uint64_t n, uint64_t *out);

/**
 * The dimension-count hypothesis at the matroid instance `(n, r)`. `margin`
 * receives NaN when the right-hand side is not positive.
 *
 * # Safety
 * `check` must be writable; `margin` must be null or writable.
 */
enum MatrepStatus matrep_theorem2_instance(uint64_t n,
                                           uint64_t r,
                                           enum MatrepCheck *check,
                                           double *margin);

/**
 * The aggregate bound on representable matroids at `n >= 12`.
 *
 * # Safety
 * `check` must be writable; `margin` must be null or writable.
 */
enum MatrepStatus matrep_main_theorem_check(uint64_t n, enum MatrepCheck *check, double *margin);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MATREP_H */
