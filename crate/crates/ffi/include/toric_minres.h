#ifndef TORIC_MINRES_H
#define TORIC_MINRES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>

// Status codes. Values 2 to 5 match the command-line exit codes.
typedef enum TmStatus {
  TM_STATUS_OK = 0,
  TM_STATUS_INTERNAL = 1,
  TM_STATUS_PARSE = 2,
  TM_STATUS_VALIDATION = 3,
  TM_STATUS_NO_POSITIVE_GRADING = 4,
  TM_STATUS_VERIFICATION = 5,
  TM_STATUS_NULL_ARGUMENT = 6,
  TM_STATUS_OUT_OF_RANGE = 7,
} TmStatus;

// Opaque session handle.
typedef struct TmSession TmSession;

// Parses `json` and builds the stratification and HHL complex. Relative
// paths in the options resolve against the current directory.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum TmStatus tm_session_from_json(const char *json, struct TmSession **out);

// # Safety
// `session` must come from [`tm_session_from_json`] and not be used
// afterwards. Null is ignored.
void tm_session_free(struct TmSession *session);

// Writes the number of cells of each dimension `0..=k` into `counts`
// (capacity `len`) and the torus dimension plus one into `written`.
//
// # Safety
// `counts` must have room for `len` values; `written` must be valid.
enum TmStatus tm_cell_counts(struct TmSession *session,
                             size_t *counts,
                             size_t len,
                             size_t *written);

// Computes the minimal resolution with the options of the input.
//
// # Safety
// `session` must be a live handle.
enum TmStatus tm_minimal_resolution(struct TmSession *session);

// Length of the minimal resolution (the torus dimension).
//
// # Safety
// `session` must be a live handle and `out` valid.
enum TmStatus tm_resolution_length(struct TmSession *session, size_t *out);

// Rank of the term in homological degree `degree`.
//
// # Safety
// `session` must be a live handle and `out` valid.
enum TmStatus tm_resolution_rank(struct TmSession *session, size_t degree, size_t *out);

// Entry `(row, col)` of `d_degree` in the canonical polynomial text
// format. Free the string with [`tm_string_free`].
//
// # Safety
// `session` must be a live handle and `out` valid.
enum TmStatus tm_differential_entry(struct TmSession *session,
                                    size_t degree,
                                    size_t row,
                                    size_t col,
                                    char **out);

// The full JSON report, as `toric-minres verify` prints it. Returns the
// report even when a stage fails, together with that stage's status.
//
// # Safety
// `session` must be a live handle and `out` valid.
enum TmStatus tm_report_json(struct TmSession *session, char **out);

// Moore-Penrose inverse of a JSON matrix (rows of integers or `"p/q"`
// strings), returned in the same format.
//
// # Safety
// `matrix_json` must be NUL-terminated and `out` valid.
enum TmStatus tm_mp_inverse_json(const char *matrix_json, char **out);

// # Safety
// `s` must come from this library, or be null.
void tm_string_free(char *s);

// Message for the last failure on this thread, or null. The pointer is
// valid until the next library call on the same thread.
const char *tm_last_error(void);

#endif /* TORIC_MINRES_H */
