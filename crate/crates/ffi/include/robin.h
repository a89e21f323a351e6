#ifndef ROBIN_H
#define ROBIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RobinCertificateStatus {
  ROBIN_CERTIFICATE_STATUS_CERTIFIED = 0,
  ROBIN_CERTIFICATE_STATUS_NO_WITNESS = 1,
  ROBIN_CERTIFICATE_STATUS_PRECONDITION_UNMET = 2,
  ROBIN_CERTIFICATE_STATUS_INDETERMINATE = 3,
} RobinCertificateStatus;

typedef enum RobinError {
  ROBIN_ERROR_OK = 0,
  ROBIN_ERROR_NULL_POINTER = 1,
  ROBIN_ERROR_INVALID_UTF8 = 2,
  ROBIN_ERROR_INVALID_INPUT = 3,
  ROBIN_ERROR_CAP_EXCEEDED = 4,
  ROBIN_ERROR_PRECISION_LIMIT = 5,
  ROBIN_ERROR_OVERFLOW = 6,
  ROBIN_ERROR_INTERNAL = 7,
  ROBIN_ERROR_PANIC = 8,
} RobinError;

typedef enum RobinVerdict {
  ROBIN_VERDICT_HOLDS = 0,
  ROBIN_VERDICT_FAILS = 1,
  ROBIN_VERDICT_INDETERMINATE = 2,
} RobinVerdict;

/**
 * Opaque certification result.
 */
typedef struct RobinCertificate RobinCertificate;

/**
 * Opaque generalized factorization.
 */
typedef struct RobinFactorization RobinFactorization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *robin_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *robin_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been freed.
 */
void robin_string_free(char *s);

/**
 * Parses a factorization in text form (`p e` and `seg lo hi e` lines).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum RobinError robin_factorization_parse(const char *text, struct RobinFactorization **out);

/**
 * Builds a factorization from parallel arrays of primes and exponents.
 *
 * # Safety
 * `primes` and `exponents` must each point to `len` readable values
 * (they may be NULL when `len` is 0) and `out` must be a valid pointer.
 */
enum RobinError robin_factorization_from_pairs(const uint64_t *primes,
                                               const uint64_t *exponents,
                                               size_t len,
                                               struct RobinFactorization **out);

/**
 * Canonical text form of `f`; free the result with `robin_string_free`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum RobinError robin_factorization_to_string(const struct RobinFactorization *f, char **out);

/**
 * # Safety
 * `f` must be NULL or a handle from this library that has not been freed.
 */
void robin_factorization_free(struct RobinFactorization *f);

/**
 * Decides σ(n) < e^γ n log log n for `n ≥ 3`. `sigma` may be NULL.
 *
 * # Safety
 * `verdict` must be a valid pointer; `sigma` must be NULL or valid.
 */
enum RobinError robin_check(uint64_t n, enum RobinVerdict *verdict, uint64_t *sigma);

/**
 * E(p) = ⌊−log T / log p⌋.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RobinError robin_exponent_threshold(uint64_t p, uint64_t *out);

/**
 * Runs the witness-prime certification on `f`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum RobinError robin_certify(const struct RobinFactorization *f,
                              bool assume_large,
                              bool with_s_exact,
                              struct RobinCertificate **out);

/**
 * # Safety
 * `c` must be a live handle.
 */
enum RobinCertificateStatus robin_certificate_status(const struct RobinCertificate *c);

/**
 * Writes the witness prime, its exponent in N and E(p). Returns false when
 * there is no witness; any output pointer may be NULL.
 *
 * # Safety
 * `c` must be a live handle; output pointers must be NULL or valid.
 */
bool robin_certificate_witness(const struct RobinCertificate *c,
                               uint64_t *p,
                               uint64_t *a,
                               uint64_t *e);

/**
 * The full certificate as one JSON object; free with `robin_string_free`.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum RobinError robin_certificate_to_json(const struct RobinCertificate *c, char **out);

/**
 * # Safety
 * `c` must be NULL or a handle from this library that has not been freed.
 */
void robin_certificate_free(struct RobinCertificate *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBIN_H */
