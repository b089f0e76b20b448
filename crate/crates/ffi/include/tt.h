#ifndef TT_H
#define TT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first three match the `tt` exit codes.
 */
typedef enum TtStatus {
  TT_STATUS_OK = 0,
  TT_STATUS_CHECK_FAILED = 1,
  TT_STATUS_INPUT_ERROR = 2,
  TT_STATUS_NULL_POINTER = 3,
  TT_STATUS_INVALID_UTF8 = 4,
  TT_STATUS_PANIC = 5,
} TtStatus;

/**
 * A model environment binding base types and constants.
 */
typedef struct TtModel TtModel;

/**
 * A finished report.
 */
typedef struct TtReport TtReport;

/**
 * A parsed script.
 */
typedef struct TtScript TtScript;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `text`. `name` labels locations in reports and may be null.
 *
 * # Safety
 * `text` and `name` are null or NUL-terminated; `out` is writable.
 */
enum TtStatus tt_script_parse(const char *name, const char *text, struct TtScript **out);

/**
 * Number of `check` statements.
 *
 * # Safety
 * `script` is null or a live handle.
 */
uintptr_t tt_script_check_count(const struct TtScript *script);

/**
 * # Safety
 * `script` is null or a handle not yet freed.
 */
void tt_script_free(struct TtScript *script);

/**
 * Loads a model environment from a JSON file; relative paths inside it
 * resolve against the file's directory.
 *
 * # Safety
 * `path` is null or NUL-terminated; `out` is writable.
 */
enum TtStatus tt_model_load(const char *path, struct TtModel **out);

/**
 * # Safety
 * `model` is null or a handle not yet freed.
 */
void tt_model_free(struct TtModel *model);

/**
 * Typechecks every judgement of the script.
 *
 * # Safety
 * `script` is a live handle; `out` is writable.
 */
enum TtStatus tt_check(const struct TtScript *script, bool keep_going, struct TtReport **out);

/**
 * Interprets the script in the model and checks soundness.
 *
 * # Safety
 * `script` and `model` are live handles; `out` is writable.
 */
enum TtStatus tt_interp(const struct TtScript *script,
                        const struct TtModel *model,
                        struct TtReport **out);

/**
 * Runs a model-check engine: `gpd`, `finset-minimal` or `finset-discrete`.
 *
 * # Safety
 * `engine` is NUL-terminated; `out` is writable.
 */
enum TtStatus tt_modelcheck(const char *engine,
                            uint64_t seed,
                            uintptr_t size,
                            struct TtReport **out);

/**
 * Π of the map in `p_path` along the map in `f_path`. A negative `trunc`
 * keeps the truncation of the files.
 *
 * # Safety
 * Paths are NUL-terminated; `out` is writable.
 */
enum TtStatus tt_sset_pi(const char *f_path,
                         const char *p_path,
                         int32_t trunc,
                         struct TtReport **out);

/**
 * The status the report was produced with.
 *
 * # Safety
 * `report` is null or a live handle.
 */
enum TtStatus tt_report_status(const struct TtReport *report);

/**
 * The report text, owned by the handle.
 *
 * # Safety
 * `report` is null or a live handle. The pointer dies with the handle.
 */
const char *tt_report_text(const struct TtReport *report);

/**
 * # Safety
 * `report` is null or a handle not yet freed.
 */
void tt_report_free(struct TtReport *report);

/**
 * The message for the last failed call on this thread, or null. Valid
 * until the next call into this library on the same thread.
 */
const char *tt_last_error(void);

/**
 * Library version, statically allocated.
 */
const char *tt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TT_H */
