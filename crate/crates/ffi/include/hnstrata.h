#ifndef HNSTRATA_H
#define HNSTRATA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of comparing two types in the polygon order.
 */
typedef enum HnsRelation {
  HNS_RELATION_EQ = 0,
  HNS_RELATION_LEQ = 1,
  HNS_RELATION_GEQ = 2,
  HNS_RELATION_INCOMPARABLE = 3,
} HnsRelation;

/**
 * Result of every fallible call.
 */
typedef enum HnsStatus {
  HNS_STATUS_OK = 0,
  HNS_STATUS_NULL_ARGUMENT = 1,
  HNS_STATUS_INVALID_UTF8 = 2,
  HNS_STATUS_MALFORMED_JSON = 3,
  HNS_STATUS_INVALID_TYPE = 4,
  HNS_STATUS_INVALID_LATTICE = 5,
  HNS_STATUS_INVALID_FAMILY = 6,
  HNS_STATUS_NOT_SEMICONTINUOUS = 7,
  HNS_STATUS_PANIC = 8,
} HnsStatus;

/**
 * A validated family over a finite space.
 */
typedef struct HnsFamily HnsFamily;

/**
 * A validated subobject lattice.
 */
typedef struct HnsLattice HnsLattice;

/**
 * A validated HN type.
 */
typedef struct HnsType HnsType;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hns_version(void);

/**
 * Error kind of the last failed call on this thread (for example
 * `"Condition3Violation"`), or null if the last call succeeded. Valid until
 * the next call into the library on the same thread.
 */
const char *hns_last_error_kind(void);

/**
 * Human-readable message of the last failed call on this thread, or null.
 */
const char *hns_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void hns_string_free(char *s);

/**
 * Parses and validates a type given as a JSON array of polynomials, each an
 * array of coefficient strings in increasing degree.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HnsStatus hns_type_from_json(const char *json, struct HnsType **out);

/**
 * # Safety
 * `ty` must be null or a handle from this library, not yet freed.
 */
void hns_type_free(struct HnsType *ty);

/**
 * Length of the type, or 0 for a null handle.
 *
 * # Safety
 * `ty` must be null or a live handle.
 */
size_t hns_type_len(const struct HnsType *ty);

/**
 * # Safety
 * `ty` must be a live handle; `out` must be writable.
 */
enum HnsStatus hns_type_to_json(const struct HnsType *ty, char **out);

/**
 * The quotient shift `(f_2 - f_1, ..., f_p - f_1)`.
 *
 * # Safety
 * `ty` must be a live handle; `out` must be writable.
 */
enum HnsStatus hns_type_shift(const struct HnsType *ty, struct HnsType **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum HnsStatus hns_type_compare(const struct HnsType *a,
                                const struct HnsType *b,
                                enum HnsRelation *out);

/**
 * Parses a lattice (`{"nodes", "leq", "P"}`) or a splitting type
 * (`{"degrees"}`) and checks every lattice invariant.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HnsStatus hns_lattice_from_json(const char *json, struct HnsLattice **out);

/**
 * # Safety
 * `lattice` must be null or a handle from this library, not yet freed.
 */
void hns_lattice_free(struct HnsLattice *lattice);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t hns_lattice_len(const struct HnsLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum HnsStatus hns_lattice_is_semistable(const struct HnsLattice *lattice, bool *out);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum HnsStatus hns_lattice_hn_type(const struct HnsLattice *lattice, struct HnsType **out);

/**
 * The filtration as JSON: `{"steps": [node ids], "graded": [polys]}`.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum HnsStatus hns_lattice_hn_filtration_json(const struct HnsLattice *lattice, char **out);

/**
 * Parses a family `{"points", "specializes", "fibers"}` and checks fibers,
 * dimension and constancy of the Hilbert polynomial on connected pieces.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HnsStatus hns_family_from_json(const char *json, struct HnsFamily **out);

/**
 * # Safety
 * `family` must be null or a handle from this library, not yet freed.
 */
void hns_family_free(struct HnsFamily *family);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `family` must be null or a live handle.
 */
size_t hns_family_len(const struct HnsFamily *family);

/**
 * Writes whether the type rises along every specialization. When it does not
 * and `witness` is non-null, a JSON witness
 * `{"generic", "special", "generic_type", "special_type"}` is written there;
 * otherwise `*witness` is set to null.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable; `witness` must be
 * null or writable.
 */
enum HnsStatus hns_family_check_semicontinuity(const struct HnsFamily *family,
                                               bool *out,
                                               char **witness);

/**
 * Stratification report as JSON, as printed by `hnstrata stratify`.
 * Fails with `HNS_STATUS_NOT_SEMICONTINUOUS` on a family whose type drops
 * under some specialization.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum HnsStatus hns_family_stratify_json(const struct HnsFamily *family, char **out);

/**
 * Point ids of the stratum of `tau`, computed by the recursive construction
 * and checked against the direct level set, as a JSON array.
 *
 * # Safety
 * `family` and `tau` must be live handles; `out` must be writable.
 */
enum HnsStatus hns_family_stratum_json(const struct HnsFamily *family,
                                       const struct HnsType *tau,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HNSTRATA_H */
