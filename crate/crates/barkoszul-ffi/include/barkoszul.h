#ifndef BARKOSZUL_H
#define BARKOSZUL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome.  `Ok` and the first two failure kinds mirror the CLI exit
 * codes; the remaining kinds only arise at the C boundary itself.
 */
typedef enum BkStatus {
  /**
   * The call succeeded; out-parameters are filled.
   */
  BkStatus_Ok = 0,
  /**
   * An exact identity failed, or an input exceeded a degree cap.
   */
  BkStatus_IdentityFailure = 1,
  /**
   * Unusable input: parse, load, range, or unknown-name failures.
   */
  BkStatus_InvalidInput = 2,
  /**
   * A required pointer argument was null.
   */
  BkStatus_NullArgument = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  BkStatus_InvalidUtf8 = 4,
} BkStatus;

/**
 * Opaque session handle: a loaded group plus caps, seed, and output format.
 */
typedef struct BkSession BkSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Opens a session on a builtin group name or a group spec file path.
 * Returns null on failure; when `error_out` is non-null it then receives the
 * failure message, owned by the caller.
 *
 * # Safety
 * `group` must point to a NUL-terminated string; `format` and `error_out`
 * may be null.
 */
struct BkSession *bk_session_open_name(const char *group,
                                       uint32_t max_p,
                                       uint32_t max_degree,
                                       uint64_t seed,
                                       const char *format,
                                       char **error_out);

/**
 * Opens a session on a group given directly as spec text (`dim n;` header
 * plus generator rows).  Same contract as `bk_session_open_name`.
 *
 * # Safety
 * `text` must point to a NUL-terminated string; `format` and `error_out`
 * may be null.
 */
struct BkSession *bk_session_open_spec(const char *text,
                                       uint32_t max_p,
                                       uint32_t max_degree,
                                       uint64_t seed,
                                       const char *format,
                                       char **error_out);

/**
 * Releases a session handle.  Null is ignored.
 *
 * # Safety
 * `handle` must be null or a pointer returned by one of the open calls, not
 * yet closed.
 */
void bk_session_close(struct BkSession *handle);

/**
 * The message of the last failing call on this session, borrowed until the
 * next failing call; null when no call has failed yet.
 *
 * # Safety
 * `handle` must be a live session pointer.
 */
const char *bk_last_error(const struct BkSession *handle);

/**
 * Hash of the loaded group's multiplication table; equal groups hash
 * equally, and reports embed the same value.
 *
 * # Safety
 * `handle` must be a live session pointer.
 */
uint64_t bk_group_hash(const struct BkSession *handle);

/**
 * Applies a named map (`psi`, `phi`, `upsilon`, `dstar`, `reynolds`,
 * `psi-star`) to textual input and writes the rendered image to `out`,
 * owned by the caller.  `input`, `form`, and `args` are each optional,
 * matching the CLI flags.
 *
 * # Safety
 * `handle` must be a live session pointer, `map` and `out` non-null;
 * `input`, `form`, and `args` may be null.
 */
enum BkStatus bk_apply(struct BkSession *handle,
                       const char *map,
                       const char *input,
                       const char *form,
                       const char *args,
                       char **out);

/**
 * Runs a verification suite (`chainmap`, `psi-phi`, `phi-upsilon`,
 * `upsilon-psi-star`, `change-of-basis`, `homology-oracle`, or `all`) and
 * writes the rendered report to `out` and the failure count to `failures`
 * (when non-null).  Returns `IdentityFailure` when any case failed; the
 * report is still written.
 *
 * # Safety
 * `handle` must be a live session pointer, `suite` and `out` non-null;
 * `failures` may be null.
 */
enum BkStatus bk_verify(struct BkSession *handle,
                        const char *suite,
                        char **out,
                        uint64_t *failures);

/**
 * Writes the dimension table for the selected components (`selector` is an
 * element name or index, or `all`) over inclusive degree ranges to `out`,
 * owned by the caller.  Backwards ranges render a header-only table.
 *
 * # Safety
 * `handle` must be a live session pointer, `selector` and `out` non-null.
 */
enum BkStatus bk_dims(struct BkSession *handle,
                      const char *selector,
                      uint32_t p_lo,
                      uint32_t p_hi,
                      int64_t internal_lo,
                      int64_t internal_hi,
                      bool invariant,
                      char **out);

/**
 * Releases a string returned through an out-parameter.  Null is ignored.
 *
 * # Safety
 * `s` must be null or a string produced by this library, not yet freed.
 */
void bk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BARKOSZUL_H */
