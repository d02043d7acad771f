#ifndef QUORUMKIT_H
#define QUORUMKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum QkStatus {
  QK_STATUS_OK = 0,
  QK_STATUS_NULL_POINTER = 1,
  QK_STATUS_INVALID_UTF8 = 2,
  QK_STATUS_CONFIG = 3,
  QK_STATUS_PARSE = 4,
  QK_STATUS_INVALID_ARGUMENT = 5,
  QK_STATUS_INTERSECTION_VIOLATION = 6,
  QK_STATUS_UNKNOWN_NODE = 7,
  QK_STATUS_UNIVERSE_TOO_LARGE = 8,
  QK_STATUS_INFEASIBLE = 9,
  QK_STATUS_NO_RESILIENT_QUORUM = 10,
  QK_STATUS_NO_FEASIBLE_CANDIDATE = 11,
  QK_STATUS_SOLVER_FAILURE = 12,
  QK_STATUS_PANIC = 13,
} QkStatus;

typedef enum QkObjective {
  QK_OBJECTIVE_LOAD = 0,
  QK_OBJECTIVE_LATENCY = 1,
  QK_OBJECTIVE_NETWORK = 2,
} QkObjective;

/**
 * A strategy bound to the system and workload it was optimized for.
 */
typedef struct QkStrategy QkStrategy;

/**
 * A quorum system together with the workload from its configuration.
 */
typedef struct QkSystem QkSystem;

/**
 * Strategy options. Limits that are zero or negative are ignored.
 */
typedef struct QkStrategyOptions {
  /**
   * One of the `QkObjective` values.
   */
  uint32_t objective;
  double capacity_limit;
  double latency_limit;
  double network_limit;
  /**
   * Resilience of the quorums the strategy may use.
   */
  uint32_t f;
} QkStrategyOptions;

/**
 * Search options. `budget == 0` means unlimited; `timeout_s <= 0` means no
 * timeout.
 */
typedef struct QkSearchOptions {
  struct QkStrategyOptions strategy;
  uint32_t min_fault_tolerance;
  uint64_t budget;
  double timeout_s;
} QkSearchOptions;

/**
 * One point of a workload distribution.
 */
typedef struct QkWorkloadPoint {
  double read_fraction;
  double weight;
} QkWorkloadPoint;

typedef struct QkMetrics {
  double load;
  double capacity;
  double latency;
  double network_load;
} QkMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default strategy options: minimize load, no limits, `f = 0`.
 */
struct QkStrategyOptions qk_strategy_options_default(void);

/**
 * Default search options: minimize load, no limits or budget.
 */
struct QkSearchOptions qk_search_options_default(void);

/**
 * Message for the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *qk_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `text` must be null or a string returned by this library, not yet freed.
 */
void qk_string_free(char *text);

/**
 * Builds a quorum system from a JSON configuration document (the format
 * read by the command-line tool).
 *
 * # Safety
 * `config_json` must be null or a NUL-terminated string; `out` must be null
 * or writable.
 */
enum QkStatus qk_system_new(const char *config_json, struct QkSystem **out);

/**
 * # Safety
 * `system` must be null or a handle from [`qk_system_new`], not yet freed.
 */
void qk_system_free(struct QkSystem *system);

/**
 * Fault tolerance of the whole system.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_system_fault_tolerance(const struct QkSystem *system, uint32_t *out);

/**
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_system_read_fault_tolerance(const struct QkSystem *system, uint32_t *out);

/**
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_system_write_fault_tolerance(const struct QkSystem *system, uint32_t *out);

/**
 * Canonical read expression.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_system_reads(const struct QkSystem *system, char **out);

/**
 * Canonical write expression.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_system_writes(const struct QkSystem *system, char **out);

/**
 * Optimal strategy. With `points == NULL` and `len == 0` the workload from
 * the configuration is used; otherwise `points[0..len]` gives the read
 * fraction distribution. `options` may be null for the defaults.
 *
 * # Safety
 * `system` must be a live handle, `points` must be null or point to `len`
 * readable entries, `options` must be null or readable, and `out` writable.
 */
enum QkStatus qk_system_strategy(const struct QkSystem *system,
                                 const struct QkWorkloadPoint *points,
                                 size_t len,
                                 const struct QkStrategyOptions *options,
                                 struct QkStrategy **out);

/**
 * # Safety
 * `strategy` must be null or a handle from [`qk_system_strategy`], not yet
 * freed.
 */
void qk_strategy_free(struct QkStrategy *strategy);

/**
 * Load, capacity, latency and network load under the strategy's workload.
 *
 * # Safety
 * `strategy` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_strategy_metrics(const struct QkStrategy *strategy, struct QkMetrics *out);

/**
 * The strategy document printed by `quorumkit strategy`.
 *
 * # Safety
 * `strategy` must be a live handle; `out` must be writable.
 */
enum QkStatus qk_strategy_to_json(const struct QkStrategy *strategy, char **out);

/**
 * Searches read expressions over the configuration's nodes and writes the
 * search document printed by `quorumkit search`. `options` may be null.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string, `options` null or
 * readable, and `out` writable.
 */
enum QkStatus qk_search(const char *config_json, const struct QkSearchOptions *options, char **out);

/**
 * Dual of a quorum expression, printed canonically.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum QkStatus qk_expr_dual(const char *expr, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUORUMKIT_H */
