#ifndef MILD_H
#define MILD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum MildStatus {
  MILD_STATUS_OK = 0,
  /**
   * rejected retraction or internal failure
   */
  MILD_STATUS_FAILURE = 1,
  /**
   * parse, degree, ring or unknown-name error, or bad arguments
   */
  MILD_STATUS_INVALID_INPUT = 2,
  /**
   * a hypothesis of the construction fails
   */
  MILD_STATUS_HYPOTHESIS_VIOLATED = 3,
  /**
   * not certified inside the window
   */
  MILD_STATUS_UNCERTIFIED = 4,
  MILD_STATUS_NULL_POINTER = 10,
  MILD_STATUS_INVALID_UTF8 = 11,
  MILD_STATUS_PANIC = 12,
} MildStatus;

/**
 * Opaque workspace handle.
 */
typedef struct MildWorkspace MildWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse and validate a workspace. On success `*out` receives a handle to
 * free with `mild_workspace_free`.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MildStatus mild_workspace_parse(const char *source,
                                     uintptr_t max_degree,
                                     struct MildWorkspace **out);

/**
 * A handle on the built-in corpus.
 */
struct MildWorkspace *mild_workspace_corpus(void);

/**
 * # Safety
 * `ws` must come from this library and not be freed twice.
 */
void mild_workspace_free(struct MildWorkspace *ws);

/**
 * Run a command such as `{"tc", "--algebra", "S3", "--n", "2"}` and store
 * the JSON report in `*json_out`. The report is produced whenever the
 * status is `Ok`, `Failure` from a rejected retraction, or `Uncertified`
 * under `--strict`; otherwise `*json_out` is NULL.
 *
 * # Safety
 * `ws` must be a live handle, `argv` must hold `argc` NUL-terminated
 * strings and `json_out` must be a valid pointer.
 */
enum MildStatus mild_run(const struct MildWorkspace *ws,
                         const char *const *argv,
                         uintptr_t argc,
                         char **json_out);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mild_string_free(char *s);

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next call into the library on the same thread.
 */
const char *mild_last_error(void);

/**
 * Library version as a static string.
 */
const char *mild_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MILD_H */
