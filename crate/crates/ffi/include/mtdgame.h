/* C API for the mtdgame attack-graph Markov game toolkit. */

#ifndef MTDGAME_H
#define MTDGAME_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Solver selector for [`mtdgame_solve`].
 */
typedef enum MtdSolveMode {
  MtdSolveMode_Exact = 0,
  MtdSolveMode_Pure = 1,
} MtdSolveMode;

/**
 * Result of every fallible call.
 */
typedef enum MtdStatus {
  MtdStatus_Ok = 0,
  MtdStatus_NullArgument = 1,
  MtdStatus_InvalidUtf8 = 2,
  MtdStatus_Io = 3,
  MtdStatus_Parse = 4,
  MtdStatus_InvalidGraph = 5,
  MtdStatus_BadConfig = 6,
  MtdStatus_UnknownKey = 7,
  MtdStatus_SolverFailure = 8,
  MtdStatus_Panic = 9,
} MtdStatus;

/**
 * Opaque vulnerability catalog handle.
 */
typedef struct MtdCatalog MtdCatalog;

/**
 * Opaque compiled game handle.
 */
typedef struct MtdGame MtdGame;

/**
 * Opaque attack graph handle.
 */
typedef struct MtdGraph MtdGraph;

/**
 * Opaque solution handle.
 */
typedef struct MtdSolution MtdSolution;

/**
 * Plain-data mirror of the game configuration.
 */
typedef struct MtdConfig {
  double gamma;
  double p_detect;
  double monitor_cost;
  double ac_easy;
  double ac_medium;
  double ac_high;
  double epsilon;
  uint64_t max_iters;
} MtdConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or NULL.
 * The pointer stays valid until the next failing call on the same thread;
 * do not free it.
 */
const char *mtdgame_last_error(void);

/**
 * Fill `out` with the default configuration.
 *
 * # Safety
 * `out` must point to writable memory for one `MtdConfig`.
 */
enum MtdStatus mtdgame_config_default(struct MtdConfig *out);

/**
 * Load and validate an attack graph from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum MtdStatus mtdgame_graph_load(const char *path, struct MtdGraph **out);

/**
 * # Safety
 * `graph` must come from [`mtdgame_graph_load`] and not be freed twice.
 */
void mtdgame_graph_free(struct MtdGraph *graph);

/**
 * Load a vulnerability catalog from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum MtdStatus mtdgame_catalog_load(const char *path, struct MtdCatalog **out);

/**
 * # Safety
 * `catalog` must come from [`mtdgame_catalog_load`] and not be freed twice.
 */
void mtdgame_catalog_free(struct MtdCatalog *catalog);

/**
 * Generate a deterministic layered scenario.
 *
 * # Safety
 * `out_graph` and `out_catalog` must be writable.
 */
enum MtdStatus mtdgame_generate(uint64_t seed,
                                uint32_t n_vms,
                                uint32_t n_vulns,
                                uint32_t n_layers,
                                struct MtdGraph **out_graph,
                                struct MtdCatalog **out_catalog);

/**
 * Compile graph + catalog + config into a game.
 *
 * # Safety
 * All handles must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_game_build(const struct MtdGraph *graph,
                                  const struct MtdCatalog *catalog,
                                  const struct MtdConfig *cfg,
                                  struct MtdGame **out);

/**
 * # Safety
 * `game` must come from a build/restrict call and not be freed twice.
 */
void mtdgame_game_free(struct MtdGame *game);

/**
 * Copy of the game with the given vulnerability keys patched out.
 *
 * # Safety
 * `keys` must point to `n_keys` NUL-terminated strings; `out` writable.
 */
enum MtdStatus mtdgame_game_restrict(const struct MtdGame *game,
                                     const char *const *keys,
                                     size_t n_keys,
                                     struct MtdGame **out);

/**
 * Solve the game; query the solution handle for values and policies.
 * A solve that hits the iteration cap still returns `Ok` with the handle's
 * `converged` flag unset.
 *
 * # Safety
 * Handles must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solve(const struct MtdGame *game,
                             const struct MtdConfig *cfg,
                             enum MtdSolveMode mode,
                             struct MtdSolution **out);

/**
 * # Safety
 * `solution` must come from [`mtdgame_solve`] and not be freed twice.
 */
void mtdgame_solution_free(struct MtdSolution *solution);

/**
 * Attacker's value at the game's initial state.
 *
 * # Safety
 * `solution` must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solution_initial_value(const struct MtdSolution *solution, double *out);

/**
 * Attacker's value at a named state.
 *
 * # Safety
 * `solution` and `state_id` must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solution_state_value(const struct MtdSolution *solution,
                                            const char *state_id,
                                            double *out);

/**
 * # Safety
 * `solution` must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solution_iterations(const struct MtdSolution *solution, uint64_t *out);

/**
 * # Safety
 * `solution` must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solution_residual(const struct MtdSolution *solution, double *out);

/**
 * Whether the solve reached epsilon before the iteration cap.
 *
 * # Safety
 * `solution` must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solution_converged(const struct MtdSolution *solution, bool *out);

/**
 * Full JSON value/policy report; free with [`mtdgame_string_free`].
 *
 * # Safety
 * `solution` must be valid; `out` must be writable.
 */
enum MtdStatus mtdgame_solution_report_json(const struct MtdSolution *solution, char **out);

/**
 * Run a coverage sweep and return the CSV text; free the string with
 * [`mtdgame_string_free`]. `seed` is only echoed into the report when
 * `has_seed` is true.
 *
 * # Safety
 * Handles must be valid; `coverages` must point to `n_coverages` values;
 * `out` must be writable.
 */
enum MtdStatus mtdgame_sweep_csv(const struct MtdGraph *graph,
                                 const struct MtdCatalog *catalog,
                                 const struct MtdConfig *cfg,
                                 const uint32_t *coverages,
                                 size_t n_coverages,
                                 uint64_t seed,
                                 bool has_seed,
                                 char **out);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from an mtdgame function and not be freed twice.
 */
void mtdgame_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MTDGAME_H */
