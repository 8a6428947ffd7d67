#ifndef CLUSTERKIT_H
#define CLUSTERKIT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define CK_OK 0

/**
 * A required pointer argument was null.
 */
#define CK_ERR_NULL -1

/**
 * A string argument was not valid UTF-8.
 */
#define CK_ERR_UTF8 -2

/**
 * Text or JSON input could not be parsed or described an invalid object.
 */
#define CK_ERR_INPUT -3

/**
 * A vertex or index was out of range.
 */
#define CK_ERR_RANGE -4

/**
 * The operation does not apply in the current state (nothing to undo, no surface, ...).
 */
#define CK_ERR_STATE -5

/**
 * Exact division had a remainder.
 */
#define CK_ERR_NOT_DIVISIBLE -6

/**
 * A configured search or size limit was hit.
 */
#define CK_ERR_LIMIT -7

/**
 * Internal failure, including a caught panic.
 */
#define CK_ERR_INTERNAL -8

/**
 * Opaque Laurent polynomial.
 */
typedef struct CkLaurent CkLaurent;

/**
 * Opaque interactive session: a seed, its triangulation if any, and an undo history.
 */
typedef struct CkSession CkSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * success. The pointer stays valid until the next call on this thread.
 */
const char *ck_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ck_string_free(char *s);

/**
 * Parses `x1^2*x2^-1 + 3` style text in `rank` variables.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` writable.
 */
int32_t ck_laurent_parse(const char *src, size_t rank, struct CkLaurent **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void ck_laurent_free(struct CkLaurent *p);

/**
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
int32_t ck_laurent_add(const struct CkLaurent *a,
                       const struct CkLaurent *b,
                       struct CkLaurent **out);

/**
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
int32_t ck_laurent_mul(const struct CkLaurent *a,
                       const struct CkLaurent *b,
                       struct CkLaurent **out);

/**
 * Exact quotient `a / b`; fails with `CK_ERR_NOT_DIVISIBLE` on a remainder.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
int32_t ck_laurent_divide_exact(const struct CkLaurent *a,
                                const struct CkLaurent *b,
                                struct CkLaurent **out);

/**
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
int32_t ck_laurent_num_terms(const struct CkLaurent *p, size_t *out);

/**
 * Writes whether every coefficient is strictly positive.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
int32_t ck_laurent_is_positive(const struct CkLaurent *p, bool *out);

/**
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
int32_t ck_laurent_to_string(const struct CkLaurent *p, char **out);

/**
 * Starts a session from JSON: `{"preset": "A2"}`, a triangulation, or a
 * seed, in the same formats the command-line tool reads.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
int32_t ck_session_new(const char *json, struct CkSession **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void ck_session_free(struct CkSession *s);

/**
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
int32_t ck_session_rank(const struct CkSession *s, size_t *out);

/**
 * Mutates at `vertex` (1-based), flipping the matching arc when the
 * session has a triangulation.
 *
 * # Safety
 * `s` must be a live handle.
 */
int32_t ck_session_mutate(struct CkSession *s, size_t vertex);

/**
 * Flips the arc with the given label, for example `"1-3"`.
 *
 * # Safety
 * `s` must be a live handle and `arc` a NUL-terminated string.
 */
int32_t ck_session_flip(struct CkSession *s, const char *arc);

/**
 * # Safety
 * `s` must be a live handle.
 */
int32_t ck_session_undo(struct CkSession *s);

/**
 * The cluster variable at `index` (1-based) as a new polynomial handle.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
int32_t ck_session_variable(const struct CkSession *s, size_t index, struct CkLaurent **out);

/**
 * The session state as JSON, identical to the `/state` payload of the
 * HTTP service.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
int32_t ck_session_state_json(const struct CkSession *s, char **out);

/**
 * Explores the exchange graph from the current seed, visiting at most
 * `max_seeds` seeds.
 *
 * # Safety
 * `s` must be a live handle; the three output pointers must be writable.
 */
int32_t ck_session_explore(const struct CkSession *s,
                           size_t max_seeds,
                           size_t *seeds,
                           size_t *variables,
                           bool *truncated);

/**
 * Runs the verifier on a start specification (same JSON as
 * `ck_session_new`). `passed` is false when some check failed; the full
 * report is written to `report` as JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `passed` and `report` writable.
 */
int32_t ck_verify(const char *json, uint32_t winding, bool *passed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTERKIT_H */
