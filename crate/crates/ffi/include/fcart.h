#ifndef FCART_H
#define FCART_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum FcartStatus {
  FCART_STATUS_OK = 0,
  FCART_STATUS_NULL_POINTER = 1,
  FCART_STATUS_INVALID_UTF8 = 2,
  FCART_STATUS_SYNTAX = 3,
  FCART_STATUS_INVALID_RING = 4,
  FCART_STATUS_INVALID_ARGUMENT = 5,
  FCART_STATUS_RING_MISMATCH = 6,
  FCART_STATUS_RESOURCE_CAP = 7,
  FCART_STATUS_NOT_CARTIER_SUBMODULE = 8,
  FCART_STATUS_NOT_F_PURE = 9,
  FCART_STATUS_ZERO_INPUT = 10,
  FCART_STATUS_DENOMINATOR_NOT_INVERTIBLE = 11,
  FCART_STATUS_INTERNAL_MISMATCH = 12,
  FCART_STATUS_UNSUPPORTED_REGIME = 13,
  // The job ran but its own consistency check failed; the report is still written.
  FCART_STATUS_CHECK_FAILED = 14,
  FCART_STATUS_PANIC = 15,
} FcartStatus;

// A Cartier structure: the operator C(h) = C_std(g h) with q = p^e.
typedef struct FcartCartier FcartCartier;

// A polynomial in some ring.
typedef struct FcartPoly FcartPoly;

// A polynomial ring F_p[x_1, ..., x_n].
typedef struct FcartRing FcartRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The pointer
// stays valid until the next failing call on the same thread.
const char *fcart_last_error_message(void);

// Creates the ring F_p[vars] from comma-separated variable names such as "x,y".
//
// # Safety
// `vars` must be a nul-terminated string and `out` a valid pointer.
enum FcartStatus fcart_ring_new(uint64_t p, const char *vars, struct FcartRing **out);

// # Safety
// `ring` must come from `fcart_ring_new` and not be freed twice; null is ignored.
void fcart_ring_free(struct FcartRing *ring);

// Parses a polynomial such as "x^2+y^3" in `ring`.
//
// # Safety
// `ring` must be a live handle, `source` nul-terminated and `out` valid.
enum FcartStatus fcart_poly_parse(const struct FcartRing *ring,
                                  const char *source,
                                  struct FcartPoly **out);

// Canonical text of a polynomial; release with `fcart_string_free`.
//
// # Safety
// `poly` must be a live handle and `out` valid.
enum FcartStatus fcart_poly_to_string(const struct FcartPoly *poly, char **out);

// # Safety
// `poly` must come from `fcart_poly_parse` and not be freed twice; null is ignored.
void fcart_poly_free(struct FcartPoly *poly);

// Cartier structure with q = p^e and twist g; a null `twist` means g = 1.
//
// # Safety
// `ring` must be live, `twist` null or live in the same ring, `out` valid.
enum FcartStatus fcart_cartier_new(const struct FcartRing *ring,
                                   uint32_t e,
                                   const struct FcartPoly *twist,
                                   struct FcartCartier **out);

// # Safety
// `cartier` must come from `fcart_cartier_new` and not be freed twice; null is ignored.
void fcart_cartier_free(struct FcartCartier *cartier);

// ν(q^m) ∩ [0, q^m) for the module generated by `module[0..module_len]`
// (the unit ideal when `module_len` is 0). The members are written to a new
// array released with `fcart_u64_array_free`.
//
// # Safety
// All handles must be live and `module` must point to `module_len` handles.
enum FcartStatus fcart_nu_set(const struct FcartCartier *cartier,
                              const struct FcartPoly *const *module,
                              size_t module_len,
                              const struct FcartPoly *f,
                              uint32_t level,
                              uint64_t **out_members,
                              size_t *out_len);

// # Safety
// `members` and `len` must come from one `fcart_nu_set` call; null is ignored.
void fcart_u64_array_free(uint64_t *members, size_t len);

// binom(num/den, n) mod p for the p-adic integer num/den.
//
// # Safety
// `out` must be valid.
enum FcartStatus fcart_lucas_binomial(int64_t num,
                                      int64_t den,
                                      uint32_t p,
                                      uint64_t n,
                                      uint32_t *out);

// Runs a JSON job and writes the JSON report. Returns
// `FCART_STATUS_CHECK_FAILED` with the report written when the job's own
// consistency check fails.
//
// # Safety
// `job` must be nul-terminated and `out` valid.
enum FcartStatus fcart_run_json(const char *job, char **out);

// # Safety
// `s` must come from this library and not be freed twice; null is ignored.
void fcart_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FCART_H */
