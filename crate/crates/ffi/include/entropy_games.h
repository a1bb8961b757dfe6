#ifndef ENTROPY_GAMES_H
#define ENTROPY_GAMES_H

/* Generated by cbindgen from the entropy-games-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum EgStatus {
  EG_STATUS_OK = 0,
  EG_STATUS_NULL_POINTER = 1,
  EG_STATUS_INVALID_UTF8 = 2,
  EG_STATUS_PARSE = 3,
  EG_STATUS_INVALID_ARGUMENT = 4,
  EG_STATUS_SOLVE = 5,
  EG_STATUS_BUFFER_TOO_SMALL = 6,
  EG_STATUS_PANIC = 7,
} EgStatus;

/**
 * A parsed game.
 */
typedef struct EgGame EgGame;

/**
 * The outcome of a solve.
 */
typedef struct EgReport EgReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a game from NUL-terminated JSON into `*out`.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum EgStatus eg_game_from_json(const char *json, struct EgGame **out);

/**
 * Releases a game; NULL is ignored.
 *
 * # Safety
 * `game` must come from [`eg_game_from_json`] and not be used afterwards.
 */
void eg_game_free(struct EgGame *game);

/**
 * Number of Despot states, 0 for NULL.
 *
 * # Safety
 * `game` must be NULL or a live game handle.
 */
size_t eg_game_num_despot(const struct EgGame *game);

/**
 * Solves `game` with the algorithm tagged `algo` (NULL means `auto`).
 * `eps <= 0` selects the algorithm's default accuracy.
 *
 * # Safety
 * `game` must be a live handle, `algo` NULL or a C string, `out` valid.
 */
enum EgStatus eg_solve(const struct EgGame *game,
                       const char *algo,
                       double eps,
                       struct EgReport **out);

/**
 * Releases a report; NULL is ignored.
 *
 * # Safety
 * `report` must come from [`eg_solve`] and not be used afterwards.
 */
void eg_report_free(struct EgReport *report);

/**
 * Copies the per-state values into `buf` (capacity `len`). The number of
 * values is stored in `*needed` when it is not NULL, also on
 * `EG_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `report` must be live; `buf` must hold `len` doubles.
 */
enum EgStatus eg_report_values(const struct EgReport *report,
                               double *buf,
                               size_t len,
                               size_t *needed);

/**
 * Largest state value; NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or live.
 */
double eg_report_free_state_value(const struct EgReport *report);

/**
 * 1 if the solver converged, 0 otherwise or for NULL.
 *
 * # Safety
 * `report` must be NULL or live.
 */
int eg_report_converged(const struct EgReport *report);

/**
 * Outer iterations of the solve; 0 for NULL.
 *
 * # Safety
 * `report` must be NULL or live.
 */
size_t eg_report_iterations(const struct EgReport *report);

/**
 * The report as JSON with node names from `game`; free with
 * [`eg_string_free`].
 *
 * # Safety
 * `game` and `report` must be live and belong together; `out` valid.
 */
enum EgStatus eg_report_to_json(const struct EgGame *game,
                                const struct EgReport *report,
                                char **out);

/**
 * Releases a string returned by the library; NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void eg_string_free(char *s);

/**
 * Checks a certificate given as JSON. `*passed` is set to 1 or 0; on
 * failure `*witness` (if not NULL) receives the offending state, or
 * `SIZE_MAX` when there is none.
 *
 * # Safety
 * `game` live, `certificate` a C string, `passed` valid, `witness` NULL or
 * valid.
 */
enum EgStatus eg_check_certificate(const struct EgGame *game,
                                   const char *certificate,
                                   int *passed,
                                   size_t *witness);

/**
 * Finite-horizon values `V^k` into `buf` (capacity `len`, at least the
 * number of Despot states).
 *
 * # Safety
 * `game` live; `buf` must hold `len` doubles.
 */
enum EgStatus eg_value_iterate(const struct EgGame *game, size_t k, double *buf, size_t len);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full length including the NUL, so a
 * call with `len = 0` sizes the buffer.
 *
 * # Safety
 * `buf` must be NULL (with `len = 0`) or hold `len` bytes.
 */
size_t eg_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTROPY_GAMES_H */
