#ifndef RIRIG_H
#define RIRIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum RirigStatus {
  RIRIG_STATUS_OK = 0,
  RIRIG_STATUS_NULL_POINTER = 1,
  RIRIG_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or proof text.
   */
  RIRIG_STATUS_PARSE = 3,
  /**
   * Well-formed input with bad shapes, labels or entries.
   */
  RIRIG_STATUS_INPUT = 4,
  /**
   * Tables violate the ririg or modal axioms.
   */
  RIRIG_STATUS_AXIOMS = 5,
  /**
   * A size or search cap was exceeded.
   */
  RIRIG_STATUS_SIZE_CAP = 6,
  /**
   * The operation is undefined on the one-element algebra.
   */
  RIRIG_STATUS_TRIVIAL = 7,
  /**
   * An element or index argument is out of range.
   */
  RIRIG_STATUS_OUT_OF_RANGE = 8,
  /**
   * A proof failed to check; see the out-parameter for the line.
   */
  RIRIG_STATUS_PROOF_REJECTED = 9,
  RIRIG_STATUS_IO = 10,
  /**
   * A Rust panic was caught at the boundary.
   */
  RIRIG_STATUS_INTERNAL = 11,
} RirigStatus;

/**
 * A validated finite I-modal ririg.
 */
typedef struct RirigAlgebra RirigAlgebra;

/**
 * A catalog of algebras up to isomorphism.
 */
typedef struct RirigCatalog RirigCatalog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. The
 * pointer stays valid until the next call into this library.
 */
const char *ririg_last_error(void);

/**
 * Parses and validates an algebra in the JSON file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum RirigStatus ririg_algebra_from_json(const char *json, struct RirigAlgebra **out_alg);

/**
 * Serializes an algebra; free the result with [`ririg_string_free`].
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_algebra_to_json(const struct RirigAlgebra *alg, char **out_str);

/**
 * # Safety
 * `alg` must be null or a handle not yet freed.
 */
void ririg_algebra_free(struct RirigAlgebra *alg);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ririg_string_free(char *s);

/**
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_algebra_size(const struct RirigAlgebra *alg, size_t *out_size);

/**
 * Number of modal symbols.
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_algebra_modal_count(const struct RirigAlgebra *alg, size_t *out_k);

/**
 * The I-filter generated by `elems[0..len]`, as a bit mask over element
 * indices.
 *
 * # Safety
 * `alg` must be a live handle; `elems` must point to `len` readable values
 * (or be null with `len == 0`); `out` must be writable.
 */
enum RirigStatus ririg_generate_filter(const struct RirigAlgebra *alg,
                                       const size_t *elems,
                                       size_t len,
                                       uint64_t *out_mask);

/**
 * Whether the subset given by `mask` is an I-filter.
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_is_ifilter(const struct RirigAlgebra *alg, uint64_t mask, bool *out_flag);

/**
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_count_ifilters(const struct RirigAlgebra *alg, size_t *out_count);

/**
 * Fails with `Trivial` on the one-element algebra.
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_is_simple(const struct RirigAlgebra *alg, bool *out_flag);

/**
 * Fails with `Trivial` on the one-element algebra.
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_is_si(const struct RirigAlgebra *alg, bool *out_flag);

/**
 * `λ(x) = x · m₁(x) ⋯ m_k(x)`.
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_lambda(const struct RirigAlgebra *alg, size_t x, size_t *out_elem);

/**
 * Contractive, prelinear and (Cm).
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_in_rc(const struct RirigAlgebra *alg, bool *out_flag);

/**
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_is_chain(const struct RirigAlgebra *alg, bool *out_flag);

/**
 * Whether every congruence of every subalgebra extends.
 *
 * # Safety
 * `alg` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_cep(const struct RirigAlgebra *alg, bool *out_flag);

/**
 * All algebras of size up to `max_size` with up to `modals` modal symbols,
 * up to isomorphism.
 *
 * # Safety
 * `out` must be writable.
 */
enum RirigStatus ririg_catalog_build(size_t max_size, size_t modals, struct RirigCatalog **out_cat);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum RirigStatus ririg_catalog_load(const char *path, struct RirigCatalog **out_cat);

/**
 * # Safety
 * `cat` must be a live handle; `path` a NUL-terminated string.
 */
enum RirigStatus ririg_catalog_save(const struct RirigCatalog *cat, const char *path);

/**
 * # Safety
 * `cat` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_catalog_len(const struct RirigCatalog *cat, size_t *out_len);

/**
 * A copy of entry `index`, owned by the caller.
 *
 * # Safety
 * `cat` must be a live handle; `out` must be writable.
 */
enum RirigStatus ririg_catalog_get(const struct RirigCatalog *cat,
                                   size_t index,
                                   struct RirigAlgebra **out_alg);

/**
 * # Safety
 * `cat` must be null or a handle not yet freed.
 */
void ririg_catalog_free(struct RirigCatalog *cat);

/**
 * Checks a proof in the text format against its own `assume:` lines.
 * Returns `ProofRejected` with the failing line number (0 for an empty
 * proof) in `bad_line`, which may be null.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `bad_line` null or writable.
 */
enum RirigStatus ririg_check_proof(const char *text, size_t *bad_line);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIRIG_H */
