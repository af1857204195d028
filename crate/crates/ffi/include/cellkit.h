#ifndef CELLKIT_H
#define CELLKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_NULL_POINTER = 1,
  CK_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or non-admissible partition text.
   */
  CK_STATUS_INVALID_PARTITION = 3,
  /**
   * Out-of-range index, element or character.
   */
  CK_STATUS_OUT_OF_RANGE = 4,
  /**
   * The input is valid but outside what the routine handles.
   */
  CK_STATUS_UNSUPPORTED = 5,
  /**
   * A required dimension is absent from a table.
   */
  CK_STATUS_MISSING_DATA = 6,
  /**
   * A computed count came out negative or non-integral.
   */
  CK_STATUS_CONTRACT_VIOLATION = 7,
  /**
   * Other library error.
   */
  CK_STATUS_FAILED = 8,
  /**
   * A panic was caught at the boundary.
   */
  CK_STATUS_INTERNAL = 9,
} CkStatus;

/**
 * Opaque table of dim V_(s,rho).
 */
typedef struct CkDimTable CkDimTable;

/**
 * Opaque validated partition.
 */
typedef struct CkPartition CkPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ck_last_error(void);

/**
 * Library version as a static string.
 */
const char *ck_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ck_string_free(char *s);

/**
 * Parses a partition such as "2,4,4" for lie type 'B', 'C' or 'D'.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CkStatus ck_partition_new(const char *text, char lie_type, struct CkPartition **out);

/**
 * # Safety
 * `p` must come from `ck_partition_new` and not be freed twice. Null is ignored.
 */
void ck_partition_free(struct CkPartition *p);

/**
 * Number of parts; 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t ck_partition_rows(const struct CkPartition *p);

/**
 * Euler characteristic of the Springer fiber, as a decimal string.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_euler(const struct CkPartition *p, char **out);

/**
 * Number of left cells in the two-sided cell of the orbit.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_left_cells(const struct CkPartition *p, char **out);

/**
 * Size of the two-sided cell; distinguished type C partitions only.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_two_sided_cell_size(const struct CkPartition *p, char **out);

/**
 * Orbit multiplicities of Y_e as a JSON array (type C).
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_solve_json(const struct CkPartition *p, char **out);

/**
 * Computes every dim V_(s,rho) for a type C partition.
 *
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_dim_table_new(const struct CkPartition *p, struct CkDimTable **out);

/**
 * Reads a table from the JSON rows {"s", "rho", "dim"} used by the CLI.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CkStatus ck_dim_table_from_json(const char *json, struct CkDimTable **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice. Null is ignored.
 */
void ck_dim_table_free(struct CkDimTable *t);

/**
 * Rank k-1 of the group the table is indexed by; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t ck_dim_table_rank(const struct CkDimTable *t);

/**
 * Number of stored (s, rho) entries; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t ck_dim_table_len(const struct CkDimTable *t);

/**
 * dim V_(s,rho); bit m-1 of `s` is z_m and bit m-1 of `rho` set means rho(z_m) = -1.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_dim_table_get(const struct CkDimTable *t, uint32_t s, uint32_t rho, char **out);

/**
 * The table as JSON rows.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
enum CkStatus ck_dim_table_to_json(const struct CkDimTable *t, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CELLKIT_H */
