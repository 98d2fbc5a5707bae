#ifndef QUADBINOM_H
#define QUADBINOM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QbStatus {
  QB_OK = 0,
  QB_NULL_POINTER = 1,
  QB_INVALID_ARGUMENT = 2,
  QB_NOT_FUNDAMENTAL = 3,
  QB_NOT_INVERTIBLE = 4,
  QB_LIMIT_EXCEEDED = 5,
  QB_INTERNAL = 6,
  QB_PANIC = 7,
} QbStatus;

/**
 * Invariants of one real quadratic field.
 */
typedef struct QbField QbField;

/**
 * Outcome of one congruence check.
 */
typedef struct QbReport QbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qb_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void qb_string_free(char *s);

/**
 * Kronecker symbol `(d/c)`: -1, 0 or 1.
 */
int32_t qb_kronecker(int64_t d, uint64_t c);

/**
 * `u_n` and `v_n` of the Lucas sequences with parameters `(a, b)`,
 * reduced modulo `modulus`.
 *
 * # Safety
 * `u_out` and `v_out` must be valid for writes.
 */
enum QbStatus qb_lucas_pair(int64_t a,
                            int64_t b,
                            uint64_t n,
                            uint64_t modulus,
                            uint64_t *u_out,
                            uint64_t *v_out);

/**
 * Compute the invariants of `Q(sqrt(d))` for a fundamental discriminant `d`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QbStatus qb_field_new(int64_t d, struct QbField **out);

/**
 * # Safety
 * `field` must be null or a handle from [`qb_field_new`], not yet freed.
 */
void qb_field_free(struct QbField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
int64_t qb_field_d(const struct QbField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
int32_t qb_field_norm(const struct QbField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
uint64_t qb_field_class_number(const struct QbField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
uint64_t qb_field_narrow_class_number(const struct QbField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
uint32_t qb_field_alpha(const struct QbField *field);

/**
 * Coefficient `a` of the unit `(a + b sqrt(d))/2`, in decimal.
 *
 * # Safety
 * `field` must be a live handle.
 */
char *qb_field_unit_a(const struct QbField *field);

/**
 * Coefficient `b` of the unit `(a + b sqrt(d))/2`, in decimal.
 *
 * # Safety
 * `field` must be a live handle.
 */
char *qb_field_unit_b(const struct QbField *field);

/**
 * Check one congruence.
 *
 * `theorem` is one of the command-line ids (`"granville"`, `"t11"`, ...).
 * `family` is `d` for field theorems and `m` otherwise. `rho` is read by
 * `t11` and `example`; `extra` is `r` for `t21` and `n` for `cor21`.
 *
 * # Safety
 * `theorem` must be a nul-terminated string and `out` valid for writes.
 */
enum QbStatus qb_verify(const char *theorem,
                        int64_t family,
                        uint64_t p,
                        int32_t rho,
                        int64_t extra,
                        struct QbReport **out);

/**
 * # Safety
 * `report` must be null or a handle from [`qb_verify`], not yet freed.
 */
void qb_report_free(struct QbReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
bool qb_report_pass(const struct QbReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
uint64_t qb_report_lhs(const struct QbReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
uint64_t qb_report_rhs(const struct QbReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
uint64_t qb_report_modulus(const struct QbReport *report);

/**
 * The report as one JSON object.
 *
 * # Safety
 * `report` must be a live handle.
 */
char *qb_report_to_json(const struct QbReport *report);

/**
 * Library version, statically allocated.
 */
const char *qb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADBINOM_H */
