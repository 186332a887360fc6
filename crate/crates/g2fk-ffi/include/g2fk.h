#ifndef G2FK_H
#define G2FK_H

/* Generated by cbindgen from the g2fk-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define G2FK_OK 0

/**
 * A required pointer argument was null.
 */
#define G2FK_ERR_NULL 1

/**
 * The prime, model, or suite is outside the supported range.
 */
#define G2FK_ERR_UNSUPPORTED 2

/**
 * An element id argument was not in `[0, order)`.
 */
#define G2FK_ERR_RANGE 3

/**
 * An invariant was violated while running (internal panic).
 */
#define G2FK_ERR_INTERNAL 4

/**
 * Opaque handle to a fully materialized group table.
 */
typedef struct G2fkTable G2fkTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the order-p^6 group table for `p` in the given model and stores a
 * handle in `*out`. `model` is 0 for the coordinate model (p >= 5 only) or
 * 1 for the matrix model.
 */
int32_t g2fk_table_build(uint32_t p, uint8_t model, struct G2fkTable **out);

/**
 * Releases a table handle. Null is accepted and ignored.
 */
void g2fk_table_free(struct G2fkTable *t);

/**
 * Number of elements in the table (p^6), or 0 on a null handle.
 */
uint64_t g2fk_table_order(const struct G2fkTable *t);

/**
 * Group product of element ids `a` and `b`, stored in `*out`.
 */
int32_t g2fk_table_mul(const struct G2fkTable *t, uint32_t a, uint32_t b, uint32_t *out);

/**
 * Group inverse of element id `a`, stored in `*out`.
 */
int32_t g2fk_table_inv(const struct G2fkTable *t, uint32_t a, uint32_t *out);

/**
 * Multiplicative order of element id `a`, stored in `*out`.
 */
int32_t g2fk_table_element_order(const struct G2fkTable *t, uint32_t a, uint32_t *out);

/**
 * Runs a verification suite ("structure", "aut", "chevalley", "p3", or
 * "all") and stores the JSON report in `*out_json` as a NUL-terminated
 * string owned by the caller. Failing checks are reported inside the JSON,
 * not through the return code.
 */
int32_t g2fk_run_suite(uint32_t p,
                       uint8_t model,
                       const char *suite,
                       uint64_t seed,
                       char **out_json);

/**
 * Releases a string previously returned through an out-parameter. Null is
 * accepted and ignored.
 */
void g2fk_string_free(char *s);

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *g2fk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* G2FK_H */
