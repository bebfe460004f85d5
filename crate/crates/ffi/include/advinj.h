#ifndef ADVINJ_H
#define ADVINJ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest recurrence table a handle may hold.
 */
#define ADVINJ_MAX_TABLE_K 5000

typedef enum AdvinjStatus {
  ADVINJ_STATUS_OK = 0,
  ADVINJ_STATUS_NULL_POINTER = 1,
  ADVINJ_STATUS_INVALID_INPUT = 2,
  ADVINJ_STATUS_SIZE_LIMIT = 3,
  ADVINJ_STATUS_PRECONDITION = 4,
  ADVINJ_STATUS_INVARIANT = 5,
  ADVINJ_STATUS_IO = 6,
  ADVINJ_STATUS_PANIC = 7,
} AdvinjStatus;

typedef enum AdvinjTerm {
  ADVINJ_TERM_NONE = 0,
  ADVINJ_TERM_FIRST = 1,
  ADVINJ_TERM_SECOND = 2,
  ADVINJ_TERM_THIRD = 3,
} AdvinjTerm;

/**
 * Coverage function handle.
 */
typedef struct AdvinjCoverage AdvinjCoverage;

/**
 * Matching handle.
 */
typedef struct AdvinjMatching AdvinjMatching;

/**
 * Recurrence table handle.
 */
typedef struct AdvinjRecurrence AdvinjRecurrence;

typedef struct AdvinjTreeOptions {
  size_t k;
  /**
   * Key children by gain bucket instead of exact gain.
   */
  bool bucketed;
  /**
   * Bucketing and guessing accuracy.
   */
  double delta;
  /**
   * Known optimum value; a value ≤ 0 runs with OPT guessing instead.
   */
  double opt_guess;
} AdvinjTreeOptions;

typedef struct AdvinjTreeResult {
  double best_value;
  size_t nodes_live_max;
  uint64_t oracle_calls;
  size_t live_guesses_max;
  /**
   * Elements in the best solution (may exceed the caller's buffer).
   */
  size_t solution_len;
} AdvinjTreeResult;

typedef struct AdvinjMatchStats {
  size_t size;
  size_t greedy_size;
  size_t branch2_size;
  size_t paths_found;
  size_t live_guesses_max;
} AdvinjMatchStats;

typedef struct AdvinjCertificate {
  bool holds;
  size_t violations;
  double min_value;
  size_t argmin_k;
} AdvinjCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `cap`). Returns the full message length without
 * the terminator, or 0 when no error was recorded.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t advinj_last_error_message(char *buf, size_t cap);

/**
 * Static name of a status code.
 */
const char *advinj_status_name(enum AdvinjStatus status);

/**
 * Unit-weight coverage function. Element `i` covers
 * `points[offsets[i] .. offsets[i+1]]`; `offsets` has `n_elements + 1`
 * entries.
 *
 * # Safety
 * Pointers must reference arrays of the stated lengths; `out` must be
 * writable.
 */
enum AdvinjStatus advinj_coverage_new(const uint64_t *points,
                                      const size_t *offsets,
                                      size_t n_elements,
                                      struct AdvinjCoverage **out);

/**
 * Weighted coverage function; `labels[j]` has weight `weights[j]`.
 *
 * # Safety
 * As [`advinj_coverage_new`]; `labels` and `weights` hold `n_weights`
 * entries.
 */
enum AdvinjStatus advinj_coverage_new_weighted(const uint64_t *points,
                                               const size_t *offsets,
                                               size_t n_elements,
                                               const uint64_t *labels,
                                               const double *weights,
                                               size_t n_weights,
                                               struct AdvinjCoverage **out);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live coverage handle.
 */
size_t advinj_coverage_ground_size(const struct AdvinjCoverage *h);

/**
 * Evaluates the function on a set of element ids.
 *
 * # Safety
 * `h` must be a live handle, `ids` must hold `len` entries and `out` must
 * be writable.
 */
enum AdvinjStatus advinj_coverage_eval(const struct AdvinjCoverage *h,
                                       const uint32_t *ids,
                                       size_t len,
                                       double *out);

/**
 * Brute-force optimum value over sets of at most `k` elements.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum AdvinjStatus advinj_coverage_optimum(const struct AdvinjCoverage *h, size_t k, double *out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void advinj_coverage_free(struct AdvinjCoverage *h);

/**
 * Runs the prefix-tree algorithm over `stream` (element ids in arrival
 * order). Up to `solution_cap` ids of the best solution are written to
 * `solution`.
 *
 * # Safety
 * `h` must be a live handle; array pointers must match their lengths;
 * `opts` and `out` must be valid.
 */
enum AdvinjStatus advinj_tree_run(const struct AdvinjCoverage *h,
                                  const uint32_t *stream,
                                  size_t len,
                                  const struct AdvinjTreeOptions *opts,
                                  uint32_t *solution,
                                  size_t solution_cap,
                                  struct AdvinjTreeResult *out);

/**
 * Greedy maximal matching of an edge stream given as `n_edges` `(u, v)`
 * pairs.
 *
 * # Safety
 * `edges` must hold `2 * n_edges` values; `out` must be writable.
 */
enum AdvinjStatus advinj_greedy_matching(const uint64_t *edges,
                                         size_t n_edges,
                                         struct AdvinjMatching **out);

/**
 * Two-branch streaming matching. `m_star = 0` runs with geometric guesses
 * of the optimum; `epsilon ≤ 0` selects the default. `stats` may be null.
 *
 * # Safety
 * `edges` must hold `2 * n_edges` values; `out` must be writable; `stats`
 * must be null or writable.
 */
enum AdvinjStatus advinj_match_run(const uint64_t *edges,
                                   size_t n_edges,
                                   size_t m_star,
                                   double epsilon,
                                   struct AdvinjMatching **out,
                                   struct AdvinjMatchStats *stats);

/**
 * Maximum-cardinality matching (bipartite graphs, or general graphs with
 * at most 20 vertices).
 *
 * # Safety
 * `edges` must hold `2 * n_edges` values; `out` must be writable.
 */
enum AdvinjStatus advinj_max_matching(const uint64_t *edges,
                                      size_t n_edges,
                                      struct AdvinjMatching **out);

/**
 * Number of matched edges, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live matching handle.
 */
size_t advinj_matching_size(const struct AdvinjMatching *h);

/**
 * Writes up to `cap_edges` sorted `(u, v)` pairs (`u < v`) to `out` and
 * returns the total number of edges.
 *
 * # Safety
 * `h` must be a live handle; `out` must be null or hold `2 * cap_edges`
 * writable values.
 */
size_t advinj_matching_edges(const struct AdvinjMatching *h, uint64_t *out, size_t cap_edges);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void advinj_matching_free(struct AdvinjMatching *h);

/**
 * Floating-point recurrence table for `1 ≤ h ≤ k ≤ k_max`, with `k_max`
 * at most [`ADVINJ_MAX_TABLE_K`].
 *
 * # Safety
 * `out` must be writable.
 */
enum AdvinjStatus advinj_recurrence_new(double t, size_t k_max, struct AdvinjRecurrence **out);

/**
 * Reads `R(k, h)` and, if `tag` is non-null, the term attaining it.
 *
 * # Safety
 * `h` must be a live handle; `value` must be writable; `tag` null or
 * writable.
 */
enum AdvinjStatus advinj_recurrence_get(const struct AdvinjRecurrence *table,
                                        size_t k,
                                        size_t h,
                                        double *value,
                                        enum AdvinjTerm *tag);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void advinj_recurrence_free(struct AdvinjRecurrence *h);

/**
 * Exact check of `R(k, k) ≥ bound_num/bound_den` for `1 ≤ k ≤ k_max`
 * with `t = t_num/t_den`.
 *
 * # Safety
 * `out` must be writable.
 */
enum AdvinjStatus advinj_recurrence_certify(uint64_t t_num,
                                            uint64_t t_den,
                                            size_t k_max,
                                            uint64_t bound_num,
                                            uint64_t bound_den,
                                            struct AdvinjCertificate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADVINJ_H */
