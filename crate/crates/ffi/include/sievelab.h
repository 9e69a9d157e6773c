#ifndef SIEVELAB_H
#define SIEVELAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Which count a bound refers to; passed to [`sievelab_bound`] as an `int32_t`.
 */
enum SievelabKind
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  SIEVELAB_KIND_N2 = 0,
  SIEVELAB_KIND_S2 = 1,
  SIEVELAB_KIND_SK = 2,
};
#ifndef __cplusplus
typedef int32_t SievelabKind;
#endif // __cplusplus

/*
 Outcome of a call.
 */
enum SievelabStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  SIEVELAB_STATUS_OK = 0,
  SIEVELAB_STATUS_NULL_POINTER = 1,
  /*
   An argument is outside the domain of the operation.
   */
  SIEVELAB_STATUS_DOMAIN = 2,
  /*
   A requested size exceeds a built-in ceiling.
   */
  SIEVELAB_STATUS_CAPACITY = 3,
  /*
   A table does not reach far enough for the request.
   */
  SIEVELAB_STATUS_TABLE_TOO_SMALL = 4,
  SIEVELAB_STATUS_TOLERANCE_NOT_MET = 5,
  SIEVELAB_STATUS_EMPTY_FEASIBLE_SET = 6,
  SIEVELAB_STATUS_PARSE = 7,
  SIEVELAB_STATUS_IO = 8,
  SIEVELAB_STATUS_PANIC = 9,
};
#ifndef __cplusplus
typedef int32_t SievelabStatus;
#endif // __cplusplus

/*
 Bit-packed odd-only sieve of all primes up to a limit.
 */
typedef struct SievelabPrimeTable SievelabPrimeTable;

/*
 Prime and smallest-prime-factor tables for counting.
 */
typedef struct SievelabTables SievelabTables;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL after none.
 The string stays valid until the next failing call on the same thread.
 */
const char *sievelab_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *sievelab_version(void);

/*
 Sieves the primes up to `limit` into a new table.

 # Safety
 `out` must be valid for a pointer write.
 */
SievelabStatus sievelab_prime_table_new(uint64_t limit, struct SievelabPrimeTable **out);

/*
 Releases a table; NULL is ignored.

 # Safety
 `table` must come from `sievelab_prime_table_new` and not be used afterwards.
 */
void sievelab_prime_table_free(struct SievelabPrimeTable *table);

/*
 `pi(x)`; `x` may not exceed the table limit.

 # Safety
 `table` must be a live handle and `out` valid for writes.
 */
SievelabStatus sievelab_prime_table_pi(const struct SievelabPrimeTable *table,
                                       uint64_t x,
                                       uint64_t *out);

/*
 Primality of `n`; `n` may not exceed the table limit.

 # Safety
 `table` must be a live handle and `out` valid for writes.
 */
SievelabStatus sievelab_prime_table_is_prime(const struct SievelabPrimeTable *table,
                                             uint64_t n,
                                             bool *out);

/*
 The largest integer the table covers.

 # Safety
 `table` must be a live handle and `out` valid for writes.
 */
SievelabStatus sievelab_prime_table_limit(const struct SievelabPrimeTable *table, uint64_t *out);

/*
 Tables for counts up to `n` with shift `b` and power `2^k`. Honors the
 `SIEVELAB_CACHE` directory.

 # Safety
 `out` must be valid for a pointer write.
 */
SievelabStatus sievelab_tables_new(uint64_t n, uint64_t b, uint32_t k, struct SievelabTables **out);

/*
 Releases counting tables; NULL is ignored.

 # Safety
 `tables` must come from `sievelab_tables_new` and not be used afterwards.
 */
void sievelab_tables_free(struct SievelabTables *tables);

/*
 `s_K(N)`. `mode` is 0 to count prime factors with multiplicity, 1 for distinct.

 # Safety
 `tables` must be a live handle and `out` valid for writes.
 */
SievelabStatus sievelab_count_sk(const struct SievelabTables *tables,
                                 uint64_t n,
                                 uint64_t b,
                                 uint32_t k,
                                 uint32_t big_k,
                                 uint32_t mode,
                                 uint64_t *out);

/*
 `n_2(N)` with prime factors above `N'^(zexp_num / zexp_den)`.

 # Safety
 `tables` must be a live handle and `out` valid for writes.
 */
SievelabStatus sievelab_count_n2(const struct SievelabTables *tables,
                                 uint64_t n,
                                 uint64_t b,
                                 uint32_t k,
                                 int64_t zexp_num,
                                 int64_t zexp_den,
                                 uint64_t *out);

/*
 `s_2(N)`, as `sievelab_count_n2` without exact divisibility by `2^k`.

 # Safety
 `tables` must be a live handle and `out` valid for writes.
 */
SievelabStatus sievelab_count_s2(const struct SievelabTables *tables,
                                 uint64_t n,
                                 uint64_t b,
                                 uint32_t k,
                                 int64_t zexp_num,
                                 int64_t zexp_den,
                                 uint64_t *out);

/*
 `C1(a, delta)`.

 # Safety
 `out` must be valid for writes.
 */
SievelabStatus sievelab_c1(double a, double delta, double *out);

/*
 `C2(a, delta)`.

 # Safety
 `out` must be valid for writes.
 */
SievelabStatus sievelab_c2(double a, double delta, double *out);

/*
 `C_delta`, integrated to absolute tolerance `tol`.

 # Safety
 `out` must be valid for writes.
 */
SievelabStatus sievelab_c_delta(double delta, double tol, double *out);

/*
 `f(a, delta) = C1 - 2 C2 - 2 delta C_delta / (1 - a)`.

 # Safety
 `out` must be valid for writes.
 */
SievelabStatus sievelab_f_ad(double a, double delta, double tol, double *out);

/*
 Leading constant of the `s_K` lower bound for `3 <= K <= 8`.

 # Safety
 `out` must be valid for writes.
 */
SievelabStatus sievelab_richert_constant(uint32_t big_k, double epsilon, double *out);

/*
 Lower bound for a count, with the twin-prime product truncated at
 `truncation`. `kind` is a `SIEVELAB_KIND_*` value and `big_k` is read only
 for `SIEVELAB_KIND_SK`. The exact bound lies in `[*value - *err, *value]`.

 # Safety
 `value` and `err` must be valid for writes.
 */
SievelabStatus sievelab_bound(int32_t kind,
                              uint32_t big_k,
                              uint64_t n,
                              uint64_t b,
                              uint32_t k,
                              double epsilon,
                              uint64_t truncation,
                              double *value,
                              double *err);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIEVELAB_H */
