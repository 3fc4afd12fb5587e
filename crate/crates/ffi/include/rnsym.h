#ifndef RNSYM_H
#define RNSYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. The first three match the `rnsym` exit codes.
 */
typedef enum RnsStatus {
  /*
   Every requested check passed.
   */
  RNS_STATUS_OK = 0,
  /*
   The report was produced and at least one check failed.
   */
  RNS_STATUS_CHECK_FAILED = 1,
  /*
   Malformed problem or request.
   */
  RNS_STATUS_INPUT_ERROR = 2,
  RNS_STATUS_NULL_ARGUMENT = 3,
  RNS_STATUS_INVALID_UTF8 = 4,
  /*
   An internal panic was caught at the boundary.
   */
  RNS_STATUS_PANIC = 5,
} RnsStatus;

/*
 A loaded problem. Opaque to C.
 */
typedef struct RnsProblem RnsProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Loads a problem from a NUL-terminated JSON string. On success `*out`
 receives a handle to release with `rns_problem_free`.

 # Safety
 `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum RnsStatus rns_problem_from_json(const char *json, struct RnsProblem **out);

/*
 Releases a problem handle. Null is ignored.

 # Safety
 `p` must come from `rns_problem_from_json` and not have been freed.
 */
void rns_problem_free(struct RnsProblem *p);

/*
 Runs a JSON request against a problem. When the status is `RNS_STATUS_OK`
 or `RNS_STATUS_CHECK_FAILED`, `*report_json` receives the report, to be
 released with `rns_string_free`; otherwise it is set to null.

 # Safety
 `p` must be a live handle, `request` a valid NUL-terminated string and
 `report_json` a valid pointer.
 */
enum RnsStatus rns_run(const struct RnsProblem *p, const char *request, char **report_json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void rns_string_free(char *s);

/*
 The last error message on this thread, or null. Valid until the next call
 into the library from the same thread; do not free.
 */
const char *rns_last_error(void);

/*
 Static name of a status code, e.g. `"check_failed"`.
 */
const char *rns_status_name(enum RnsStatus status);

/*
 Library version as a static string.
 */
const char *rns_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RNSYM_H */
