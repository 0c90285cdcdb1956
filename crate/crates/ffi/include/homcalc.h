#ifndef HOMCALC_H
#define HOMCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The numeric values match the exit codes of the `homcalc` binary.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  /**
   * The call ran but the verification report contains failing rows.
   */
  HC_STATUS_CHECK_FAILED = 1,
  HC_STATUS_PARSE = 2,
  HC_STATUS_VALIDATION = 3,
  /**
   * Mathematically invalid input: a non-cycle, a degree out of range, a bad modulus.
   */
  HC_STATUS_MATH = 4,
  HC_STATUS_INTERNAL = 5,
  HC_STATUS_NULL_POINTER = 6,
  HC_STATUS_UTF8 = 7,
} HcStatus;

/**
 * Opaque handle to a validated chain complex.
 */
typedef struct HcComplex HcComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a library space from a recipe such as `klein`, `lens:3:4` or `bzp:3:8`.
 *
 * # Safety
 * `recipe` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_complex_from_recipe(const char *recipe, struct HcComplex **out);

/**
 * Parses and validates a complex in the JSON interchange format.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_complex_from_json(const char *json, struct HcComplex **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `c` must come from this library and not be used afterwards.
 */
void hc_complex_free(struct HcComplex *c);

/**
 * Serializes a complex to the interchange format.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_complex_to_json(const struct HcComplex *c, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hc_string_free(char *s);

/**
 * `H_degree(c; Z/modulus)` as JSON, `modulus = 0` meaning integer coefficients.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum HcStatus hc_homology(const struct HcComplex *c, int64_t degree, uint64_t modulus, char **out);

/**
 * Both Bockstein images of the mod-`k` class of the chain `chain[0..len]`.
 *
 * # Safety
 * `c` must be a live handle, `chain` must point to `len` integers (it may be
 * null when `len` is 0) and `out` must be a valid pointer.
 */
enum HcStatus hc_bockstein(const struct HcComplex *c,
                           int64_t degree,
                           uint64_t k,
                           const int64_t *chain,
                           uintptr_t len,
                           char **out);

/**
 * Runs a verification suite (`les`, `les2`, `compat`, `mv`, `pair`,
 * `derivation`, `glued`, `all`) and writes the report as JSON.
 *
 * `c` may be null to use the built-in spaces; `k = 0` selects the default
 * moduli. Returns [`HcStatus::CheckFailed`] when the report has failing rows,
 * in which case `out` is still filled.
 *
 * # Safety
 * `c` must be null or a live handle, `suite` a NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_verify(const struct HcComplex *c,
                        const char *suite,
                        uint64_t k,
                        uint64_t seed,
                        uintptr_t max_degree,
                        char **out);

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *hc_last_error(void);

/**
 * Library version, a static string.
 */
const char *hc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMCALC_H */
