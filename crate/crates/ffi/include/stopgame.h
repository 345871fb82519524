#ifndef STOPGAME_H
#define STOPGAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StopgameStatus {
  STOPGAME_STATUS_OK = 0,
  STOPGAME_STATUS_NULL_POINTER = 1,
  STOPGAME_STATUS_INVALID_UTF8 = 2,
  STOPGAME_STATUS_PARSE = 3,
  STOPGAME_STATUS_VALIDATION = 4,
  STOPGAME_STATUS_VERIFICATION_FAILED = 5,
  STOPGAME_STATUS_OVERFLOW = 6,
  STOPGAME_STATUS_BUFFER_TOO_SMALL = 7,
  STOPGAME_STATUS_INTERNAL = 8,
} StopgameStatus;

// A parsed and validated scenario.
typedef struct StopgameScenario StopgameScenario;

// A solved scenario.
typedef struct StopgameSolution StopgameSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a scenario from JSON text.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum StopgameStatus stopgame_scenario_from_json(const char *json, struct StopgameScenario **out);

// Generates the seeded random scenario used by the CLI's `--random`.
//
// # Safety
// `out` must be a valid pointer.
enum StopgameStatus stopgame_scenario_random(uint32_t horizon,
                                             uint32_t outcomes,
                                             uint64_t seed,
                                             struct StopgameScenario **out);

// # Safety
// `scenario` must come from this library and not be used afterwards.
void stopgame_scenario_free(struct StopgameScenario *scenario);

// Canonical JSON of the scenario file (sorted keys).
//
// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_scenario_to_json(const struct StopgameScenario *scenario, char **out);

// Horizon and outcome count of a scenario.
//
// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_scenario_shape(const struct StopgameScenario *scenario,
                                            size_t *horizon,
                                            size_t *outcomes);

// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_solve(const struct StopgameScenario *scenario,
                                   struct StopgameSolution **out);

// # Safety
// `solution` must come from this library and not be used afterwards.
void stopgame_solution_free(struct StopgameSolution *solution);

// Exact game value as a `"num/den"` string.
//
// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_solution_value(const struct StopgameSolution *solution, char **out);

// Game value rounded to the nearest double.
//
// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_solution_value_f64(const struct StopgameSolution *solution,
                                                double *out);

// Writes the inf-player's Dynkin stopping time, one entry per outcome.
//
// # Safety
// `buf` must hold at least `len` entries.
enum StopgameStatus stopgame_solution_rho_d(const struct StopgameSolution *solution,
                                            size_t *buf,
                                            size_t len);

// Writes the sup-player's Dynkin stopping time, one entry per outcome.
//
// # Safety
// `buf` must hold at least `len` entries.
enum StopgameStatus stopgame_solution_tau_d(const struct StopgameSolution *solution,
                                            size_t *buf,
                                            size_t len);

// Solution report as JSON, without enumeration values.
//
// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_solution_report_json(const struct StopgameSolution *solution,
                                                  char **out);

// Solves and verifies against exhaustive enumeration, writing the full
// report. Zero caps select the defaults; `eps` applies to float-mode
// scenarios only. Returns `VerificationFailed` (with the report written)
// when any check fails.
//
// # Safety
// Pointers must be valid.
enum StopgameStatus stopgame_verify_json(const struct StopgameScenario *scenario,
                                         uint64_t stopping_cap,
                                         uint64_t strategy_cap,
                                         double eps,
                                         char **out);

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library.
const char *stopgame_last_error(void);

// # Safety
// `s` must come from this library and not be used afterwards.
void stopgame_string_free(char *s);

// Library version, static storage.
const char *stopgame_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STOPGAME_H */
