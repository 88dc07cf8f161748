#ifndef SUMSET_KIT_H
#define SUMSET_KIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every call.
 */
typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_UTF8 = 2,
  SK_STATUS_PARSE = 3,
  SK_STATUS_DOMAIN = 4,
  SK_STATUS_PRECONDITION = 5,
  SK_STATUS_CONTRACT = 6,
  SK_STATUS_RESOURCE = 7,
  SK_STATUS_USAGE = 8,
  SK_STATUS_INVARIANT = 9,
  SK_STATUS_PANIC = 10,
} SkStatus;

/*
 A finite abelian group.
 */
typedef struct SkGroup SkGroup;

/*
 A subset of a group.
 */
typedef struct SkSubset SkSubset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a group spec such as `"Z2xZ4"`.

 # Safety
 `spec` must be a NUL-terminated string; `out_group` must be writable.
 */
enum SkStatus sk_group_parse(const char *spec, struct SkGroup **out_group);

/*
 Writes the order of the group.

 # Safety
 `group` must come from `sk_group_parse`; `out_order` must be writable.
 */
enum SkStatus sk_group_order(const struct SkGroup *group, size_t *out_order);

/*
 Releases a group. Null is ignored.

 # Safety
 `group` must come from `sk_group_parse` and not be used afterwards.
 */
void sk_group_free(struct SkGroup *group);

/*
 Parses a subset given as a JSON list of coordinate tuples or as
 comma-separated residues.

 # Safety
 `group` must be live; `spec` NUL-terminated; `out_subset` writable.
 */
enum SkStatus sk_subset_parse(const struct SkGroup *group,
                              const char *spec,
                              struct SkSubset **out_subset);

/*
 Writes the number of elements of the subset.

 # Safety
 `subset` must be live; `out_len` writable.
 */
enum SkStatus sk_subset_len(const struct SkSubset *subset, size_t *out_len);

/*
 Writes the subset as a JSON list of coordinate tuples.

 # Safety
 `subset` must be live; `out_json` writable.
 */
enum SkStatus sk_subset_to_json(const struct SkSubset *subset, char **out_json);

/*
 Releases a subset. Null is ignored.

 # Safety
 `subset` must come from this library and not be used afterwards.
 */
void sk_subset_free(struct SkSubset *subset);

/*
 Computes `A+B` as a new subset.

 # Safety
 `a`, `b` must be live; `out_sum` writable.
 */
enum SkStatus sk_sumset(const struct SkSubset *a,
                        const struct SkSubset *b,
                        struct SkSubset **out_sum);

/*
 Writes whether `(A, B)` is an elementary pair.

 # Safety
 `a`, `b` must be live; `out_flag` writable.
 */
enum SkStatus sk_is_elementary(const struct SkSubset *a, const struct SkSubset *b, bool *out_flag);

/*
 Builds a certificate for `(A, B)` in the given mode (`"kemperman"`,
 `"dual"` or `"me"`) and writes it as JSON.

 # Safety
 `a`, `b` must be live; `mode` NUL-terminated; `out_json` writable.
 */
enum SkStatus sk_decompose(const struct SkSubset *a,
                           const struct SkSubset *b,
                           const char *mode,
                           char **out_json);

/*
 Checks a JSON certificate against `(A, B)`. Writes the verdict to
 `out_valid` and, when `out_report` is non-null, the clause report as JSON.

 # Safety
 `a`, `b` must be live; `cert_json` NUL-terminated; `out_valid` writable;
 `out_report` null or writable.
 */
enum SkStatus sk_check_certificate(const struct SkSubset *a,
                                   const struct SkSubset *b,
                                   const char *cert_json,
                                   bool *out_valid,
                                   char **out_report);

/*
 Evaluates one statement (`"kneser"`, `"kemperman_scherk"`,
 `"corollary_half"`, `"equality_claim"`) on `(A, B)` and writes the report
 as JSON.

 # Safety
 `a`, `b` must be live; `theorem` NUL-terminated; `out_json` writable.
 */
enum SkStatus sk_verify(const char *theorem,
                        const struct SkSubset *a,
                        const struct SkSubset *b,
                        char **out_json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void sk_string_free(char *s);

/*
 Message of the last failed call on this thread, or null. The pointer stays
 valid until the next call into this library on the same thread.
 */
const char *sk_last_error(void);

/*
 Static name of a status code.
 */
const char *sk_status_name(enum SkStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMSET_KIT_H */
