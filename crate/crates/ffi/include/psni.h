#ifndef PSNI_H
#define PSNI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsniStatus {
  PSNI_STATUS_OK = 0,
  PSNI_STATUS_NULL_POINTER = 1,
  PSNI_STATUS_INVALID_ARGUMENT = 2,
  PSNI_STATUS_INVALID_CONFIG = 3,
  PSNI_STATUS_WRONG_ALPHA = 4,
  PSNI_STATUS_UNKNOWN_CHART = 5,
  PSNI_STATUS_IO = 6,
  PSNI_STATUS_INTERNAL = 7,
} PsniStatus;

typedef struct PsniChartDb PsniChartDb;

/**
 * Fact index over `0..=n_max` for one rule configuration.
 */
typedef struct PsniIndex PsniIndex;

typedef struct PsniReport PsniReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *psni_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void psni_string_free(char *s);

uint32_t psni_alpha(uint64_t n);

/**
 * 2-adic valuation of `C(top, bottom)`; negative `top` means `2^L + top`.
 * Writes -1 when the coefficient is zero.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsniStatus psni_binom_nu(int64_t top, uint64_t bottom, int64_t *out);

/**
 * Builds the index for `0..=n_max`. `config` is rule-configuration text
 * or NULL for the defaults.
 *
 * # Safety
 * `config` is NULL or a NUL-terminated string; `out` must be valid for writes.
 */
enum PsniStatus psni_index_new(const char *config, uint64_t n_max, struct PsniIndex **out);

/**
 * # Safety
 * `index` is NULL or a live handle from [`psni_index_new`].
 */
void psni_index_free(struct PsniIndex *index);

/**
 * `K(n)` and its first source. `source` may be NULL; otherwise it receives
 * a string to release with [`psni_string_free`] (NULL when no rule applies).
 *
 * # Safety
 * `index` must be live; `k` valid for writes; `source` NULL or valid for writes.
 */
enum PsniStatus psni_index_best(const struct PsniIndex *index,
                                uint64_t n,
                                uint64_t *k,
                                char **source);

/**
 * `D(n)` from the index.
 *
 * # Safety
 * `index` must be live; `d` valid for writes.
 */
enum PsniStatus psni_index_d(const struct PsniIndex *index, uint64_t n, uint64_t *d);

/**
 * The embedded chart database.
 */
struct PsniChartDb *psni_chartdb_builtin(void);

/**
 * # Safety
 * `path` is a NUL-terminated string; `out` must be valid for writes.
 */
enum PsniStatus psni_chartdb_load(const char *path, struct PsniChartDb **out);

/**
 * # Safety
 * `db` is NULL or a live chart database handle.
 */
void psni_chartdb_free(struct PsniChartDb *db);

/**
 * Replays part `part` (`'a'`..`'e'`) of the main family at `m`.
 *
 * # Safety
 * `db` must be live; `out` valid for writes.
 */
enum PsniStatus psni_replay(const struct PsniChartDb *db,
                            char part,
                            uint64_t m,
                            struct PsniReport **out);

/**
 * 1 when every statement's obstruction is nonzero, 0 otherwise, -1 for NULL.
 *
 * # Safety
 * `report` is NULL or live.
 */
int32_t psni_report_nonzero(const struct PsniReport *report);

/**
 * Human-readable report; release with [`psni_string_free`].
 *
 * # Safety
 * `report` is NULL or live.
 */
char *psni_report_text(const struct PsniReport *report);

/**
 * # Safety
 * `report` is NULL or a live report handle.
 */
void psni_report_free(struct PsniReport *report);

/**
 * Runs every claim check. `failures` receives the number of failed exact
 * claims; `text`, if not NULL, receives the machine-readable lines.
 *
 * # Safety
 * `config` is NULL or a NUL-terminated string; `failures` valid for
 * writes; `text` NULL or valid for writes.
 */
enum PsniStatus psni_verify_claims(const char *config, uint32_t *failures, char **text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSNI_H */
