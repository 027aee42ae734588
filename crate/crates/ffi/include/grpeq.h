#ifndef GRPEQ_H
#define GRPEQ_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GrpeqStatus {
  GRPEQ_STATUS_OK = 0,
  /**
   * Null pointer, invalid UTF-8 or an out-of-range element.
   */
  GRPEQ_STATUS_INVALID_ARGUMENT = 1,
  GRPEQ_STATUS_INPUT = 2,
  GRPEQ_STATUS_BUDGET_EXCEEDED = 3,
  GRPEQ_STATUS_NOT_SOLVABLE = 4,
  GRPEQ_STATUS_NILPOTENT = 5,
  GRPEQ_STATUS_INAPPLICABLE = 6,
  GRPEQ_STATUS_INTERNAL = 7,
  GRPEQ_STATUS_IO = 8,
  GRPEQ_STATUS_OTHER = 9,
  GRPEQ_STATUS_PANIC = 10,
} GrpeqStatus;

/**
 * A verified `(K, H)` certificate together with its group.
 */
typedef struct GrpeqCertificate GrpeqCertificate;

/**
 * An expression with the group name from its file header.
 */
typedef struct GrpeqExpression GrpeqExpression;

/**
 * A finite group.
 */
typedef struct GrpeqGroup GrpeqGroup;

/**
 * Summary of a certificate.
 */
typedef struct GrpeqCertInfo {
  size_t order;
  size_t fitting_length;
  size_t k_order;
  size_t h_order;
  size_t fitl_k;
  /**
   * Number of cosets of H, i.e. colors.
   */
  size_t index;
  size_t m;
} GrpeqCertInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Owned by the
 * library; valid until the next failing call.
 */
const char *grpeq_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from a grpeq function returning an owned string, or be NULL.
 */
void grpeq_string_free(char *s);

/**
 * Loads a catalog group (`s4`, `g168`, …), `c<n>`, or a generator file.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum GrpeqStatus grpeq_group_load(const char *name, struct GrpeqGroup **out_group);

/**
 * Builds a group from generator-file text (`degree N` then cycles).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum GrpeqStatus grpeq_group_from_spec(const char *text, struct GrpeqGroup **out_group);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards, or be NULL.
 */
void grpeq_group_free(struct GrpeqGroup *g);

/**
 * Order of the group, 0 for a NULL handle.
 *
 * # Safety
 * `g` must be a live handle or NULL.
 */
size_t grpeq_group_order(const struct GrpeqGroup *g);

/**
 * Product `a·b` of two element indices.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum GrpeqStatus grpeq_group_mul(const struct GrpeqGroup *g, size_t a, size_t b, size_t *out_elem);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum GrpeqStatus grpeq_group_fitting_length(const struct GrpeqGroup *g, size_t *out_len);

/**
 * Searches for a certificate; the group is copied into it.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum GrpeqStatus grpeq_find_kh(const struct GrpeqGroup *g, struct GrpeqCertificate **out_cert);

/**
 * # Safety
 * `c` must come from this library and not be used afterwards, or be NULL.
 */
void grpeq_cert_free(struct GrpeqCertificate *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum GrpeqStatus grpeq_cert_info(const struct GrpeqCertificate *c, struct GrpeqCertInfo *out_info);

/**
 * Certificate text; free with `grpeq_string_free`.
 *
 * # Safety
 * `c` must be a live handle; `name` a NUL-terminated string; `out` writable.
 */
enum GrpeqStatus grpeq_cert_to_text(const struct GrpeqCertificate *c,
                                    const char *name,
                                    char **out_text);

/**
 * Loads and re-verifies certificate text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` writable.
 */
enum GrpeqStatus grpeq_cert_from_text(const char *text, struct GrpeqCertificate **out_cert);

/**
 * Parses an expression file (`group <name> vars <n>` then tokens).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` writable.
 */
enum GrpeqStatus grpeq_expression_parse(const char *text, struct GrpeqExpression **out_expr);

/**
 * Group name from the expression header; owned by the handle.
 *
 * # Safety
 * `e` must be a live handle or NULL.
 */
const char *grpeq_expression_group(const struct GrpeqExpression *e);

/**
 * # Safety
 * `e` must come from this library and not be used afterwards, or be NULL.
 */
void grpeq_expression_free(struct GrpeqExpression *e);

/**
 * Brute-force EQNSAT (`identity == false`) or EQNID (`identity == true`)
 * within `budget` assignments (0 for the default).
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum GrpeqStatus grpeq_solve(const struct GrpeqGroup *g,
                             const struct GrpeqExpression *e,
                             bool identity,
                             uint64_t budget,
                             bool *out_answer);

/**
 * Compiles the coloring instance of a graph (`n` vertices, `m` edges as
 * `2m` endpoint indices) over the certificate and decides it exactly.
 * Writes the EQNSAT answer (colorable) and the EQNID answer.
 *
 * # Safety
 * `c` must be live; `edges` must hold `2*m` values; outputs writable.
 */
enum GrpeqStatus grpeq_decide_coloring(const struct GrpeqCertificate *c,
                                       size_t n,
                                       const uint32_t *edges,
                                       size_t m,
                                       bool *out_sat,
                                       bool *out_id);

/**
 * Library version, static string.
 */
const char *grpeq_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRPEQ_H */
