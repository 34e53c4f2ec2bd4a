#ifndef LOGDERHAM_H
#define LOGDERHAM_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LdhStatus {
  LDH_STATUS_OK = 0,
  // malformed JSON, invalid arrangement, bad weights
  LDH_STATUS_INVALID_INPUT = 1,
  // a mathematical invariant failed inside the library
  LDH_STATUS_INTERNAL = 2,
  LDH_STATUS_NULL_POINTER = 3,
  // the output buffer is too short; the required length is still written
  LDH_STATUS_BUFFER_TOO_SMALL = 4,
  LDH_STATUS_UTF8 = 5,
  LDH_STATUS_PANIC = 6,
} LdhStatus;

// Opaque arrangement handle with its intersection lattice.
typedef struct LdhArrangement LdhArrangement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses an arrangement file (JSON text) into a new handle.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum LdhStatus ldh_arrangement_from_json(const char *json, struct LdhArrangement **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `arr` must come from `ldh_arrangement_from_json` and not be used again.
void ldh_arrangement_free(struct LdhArrangement *arr);

// Number of variables and of hyperplanes.
//
// # Safety
// All pointers must be valid.
enum LdhStatus ldh_arrangement_size(const struct LdhArrangement *arr,
                                    size_t *nvars,
                                    size_t *hyperplanes);

// Betti numbers of the complement with constant coefficients, from the
// Möbius function. Writes `nvars + 1` values.
//
// # Safety
// `out` must have room for `capacity` values; `written` must be valid.
enum LdhStatus ldh_os_betti(const struct LdhArrangement *arr,
                            uint64_t *out,
                            size_t capacity,
                            size_t *written);

// Twisted Betti numbers for rational weights given as strings such as
// `"1/2"`. `certified` receives whether the weight conditions hold.
//
// # Safety
// `weights` must point to `count` nul-terminated strings; the output
// pointers must be valid.
enum LdhStatus ldh_twisted_betti(const struct LdhArrangement *arr,
                                 const char *const *weights,
                                 size_t count,
                                 uint64_t *out,
                                 size_t capacity,
                                 size_t *written,
                                 bool *certified);

// Lattice report as JSON, the same document `logderham lattice --json`
// prints. Free the result with `ldh_string_free`.
//
// # Safety
// `out` must be valid.
enum LdhStatus ldh_lattice_json(const struct LdhArrangement *arr, char **out);

// Betti report as JSON, as printed by `logderham betti --json`.
//
// # Safety
// As for `ldh_twisted_betti`; `out` must be valid.
enum LdhStatus ldh_betti_json(const struct LdhArrangement *arr,
                              const char *const *weights,
                              size_t count,
                              bool normalize,
                              char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void ldh_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *ldh_last_error(void);

// Library version, a static string.
const char *ldh_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGDERHAM_H */
