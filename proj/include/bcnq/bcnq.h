#ifndef BCNQ_H
#define BCNQ_H

/*
 * C interface to the bcnq library: Boolean control networks, congruence
 * refinement, quotient systems and controller synthesis on quotients.
 *
 * Conventions
 *   - Every state, input and class index is 1-based.
 *   - Functions returning bcnq_status write their result through the last
 *     pointer argument only on BCNQ_OK; on failure a message is available
 *     from bcnq_last_error() until the next call on the same thread.
 *   - Handles are opaque and owned by the caller; free them with the
 *     matching *_free function (NULL is accepted).
 *   - Strings returned through char** are heap-allocated and released with
 *     bcnq_string_free().
 *   - Text conversions use the line-oriented file formats (see README).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define BCNQ_API __declspec(dllexport)
#else
#  define BCNQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bcnq_status {
  BCNQ_OK = 0,
  BCNQ_INVALID_ARGUMENT = 1,
  BCNQ_PARSE = 2,
  BCNQ_IO = 3,
  /* The partition is not a congruence; see bcnq_check_congruence. */
  BCNQ_CONGRUENCE = 4,
  BCNQ_NOT_STABILIZABLE = 5,
  /* A cost is not constant on some class. */
  BCNQ_ILL_DEFINED = 6,
  BCNQ_INTERNAL = 7
} bcnq_status;

typedef enum bcnq_class_order {
  /* Class of state 1 first, then by ascending smallest member. */
  BCNQ_ORDER_FIRST_OCCURRENCE = 0,
  /* Distinct rows of the relation matrix sorted ascending. */
  BCNQ_ORDER_SORTED_ROWS = 1
} bcnq_class_order;

typedef struct bcnq_network bcnq_network;
typedef struct bcnq_partition bcnq_partition;
typedef struct bcnq_quotient bcnq_quotient;
typedef struct bcnq_feedback bcnq_feedback;
typedef struct bcnq_cost bcnq_cost;
typedef struct bcnq_solution bcnq_solution;

BCNQ_API const char* bcnq_last_error(void);
BCNQ_API const char* bcnq_status_name(bcnq_status status);
BCNQ_API void bcnq_string_free(char* s);

/* ---- networks ---------------------------------------------------------- */

BCNQ_API bcnq_status bcnq_network_load(const char* path, bcnq_network** out);
BCNQ_API bcnq_status bcnq_network_parse(const char* text, bcnq_network** out);
/* Truth-table file -> algebraic form. */
BCNQ_API bcnq_status bcnq_network_load_truth_table(const char* path, bcnq_network** out);
BCNQ_API bcnq_status bcnq_network_parse_truth_table(const char* text, bcnq_network** out);
/* `columns` holds n_states * n_inputs successor indices. */
BCNQ_API bcnq_status bcnq_network_from_columns(size_t n_states, size_t n_inputs,
                                               const size_t* columns, bcnq_network** out);
BCNQ_API void bcnq_network_free(bcnq_network* net);

BCNQ_API size_t bcnq_network_states(const bcnq_network* net);
BCNQ_API size_t bcnq_network_inputs(const bcnq_network* net);
BCNQ_API bcnq_status bcnq_network_step(const bcnq_network* net, size_t x, size_t u, size_t* out);
/* Copies the n_states * n_inputs columns; `capacity` must be large enough. */
BCNQ_API bcnq_status bcnq_network_columns(const bcnq_network* net, size_t* buffer,
                                          size_t capacity);
BCNQ_API bcnq_status bcnq_network_to_text(const bcnq_network* net, char** out);

/* ---- partitions -------------------------------------------------------- */

BCNQ_API bcnq_status bcnq_partition_load(const char* path, bcnq_partition** out);
BCNQ_API bcnq_status bcnq_partition_parse(const char* text, bcnq_partition** out);
/* Blocks are the level sets of labels[0..n-1]. */
BCNQ_API bcnq_status bcnq_partition_from_labels(size_t n, const size_t* labels,
                                                bcnq_partition** out);
/* {target, complement}. */
BCNQ_API bcnq_status bcnq_partition_target(size_t n, const size_t* target, size_t count,
                                           bcnq_partition** out);
BCNQ_API void bcnq_partition_free(bcnq_partition* p);

BCNQ_API size_t bcnq_partition_states(const bcnq_partition* p);
BCNQ_API size_t bcnq_partition_blocks(const bcnq_partition* p);
/* Canonical (ascending smallest member) block index of state x. */
BCNQ_API bcnq_status bcnq_partition_block_of(const bcnq_partition* p, size_t x, size_t* out);
BCNQ_API bcnq_status bcnq_partition_to_text(const bcnq_partition* p, char** out);

/* Largest congruence inside `seed`. `k_star` (may be NULL) receives the
 * first k with A_{k+1} = A_k. */
BCNQ_API bcnq_status bcnq_refine(const bcnq_network* net, const bcnq_partition* seed,
                                 bcnq_partition** out, size_t* k_star);

/* *holds = 1 when `p` is a congruence. Otherwise *holds = 0 and, if
 * `witness` is not NULL, witness = {input, a, b}. */
BCNQ_API bcnq_status bcnq_check_congruence(const bcnq_network* net, const bcnq_partition* p,
                                           int* holds, size_t witness[3]);

/* ---- quotients --------------------------------------------------------- */

/* BCNQ_CONGRUENCE when `p` is not a congruence. */
BCNQ_API bcnq_status bcnq_quotient_build(const bcnq_network* net, const bcnq_partition* p,
                                         bcnq_class_order order, bcnq_quotient** out);
BCNQ_API void bcnq_quotient_free(bcnq_quotient* q);

BCNQ_API size_t bcnq_quotient_classes(const bcnq_quotient* q);
BCNQ_API bcnq_status bcnq_quotient_class_of(const bcnq_quotient* q, size_t x, size_t* out);
/* Independent copy of the reduced network. */
BCNQ_API bcnq_status bcnq_quotient_network(const bcnq_quotient* q, bcnq_network** out);
/* Class assignment in the bcnq-classes format. */
BCNQ_API bcnq_status bcnq_quotient_classes_to_text(const bcnq_quotient* q, char** out);

/* ---- set stabilization ------------------------------------------------- */

/* Synthesizes a feedback stabilizing `net` to the target set. A network that
 * cannot be stabilized still yields BCNQ_OK and a handle for which
 * bcnq_feedback_stabilizable() is 0.
 *
 * With `via_quotient` the feedback is synthesized on the quotient by the
 * largest congruence inside {target, complement} and lifted. When the
 * quotient is not stabilizable that route is inconclusive; the function then
 * runs direct synthesis and reports it through
 * bcnq_feedback_quotient_inconclusive(). */
BCNQ_API bcnq_status bcnq_stabilize(const bcnq_network* net, const size_t* target, size_t count,
                                    int via_quotient, bcnq_class_order order,
                                    bcnq_feedback** out);
BCNQ_API bcnq_status bcnq_feedback_load(const char* path, bcnq_feedback** out);
BCNQ_API bcnq_status bcnq_feedback_parse(const char* text, bcnq_feedback** out);
BCNQ_API void bcnq_feedback_free(bcnq_feedback* fb);

BCNQ_API int bcnq_feedback_stabilizable(const bcnq_feedback* fb);
BCNQ_API int bcnq_feedback_quotient_inconclusive(const bcnq_feedback* fb);
BCNQ_API size_t bcnq_feedback_states(const bcnq_feedback* fb);
/* Size of the quotient used, 0 for direct synthesis. */
BCNQ_API size_t bcnq_feedback_quotient_states(const bcnq_feedback* fb);
BCNQ_API size_t bcnq_feedback_settling_bound(const bcnq_feedback* fb);
BCNQ_API bcnq_status bcnq_feedback_input_for(const bcnq_feedback* fb, size_t x, size_t* out);
/* States that cannot be stabilized. `*count` receives the total; up to
 * `capacity` of them are copied to `buffer` (may be NULL). */
BCNQ_API bcnq_status bcnq_feedback_unstabilizable(const bcnq_feedback* fb, size_t* buffer,
                                                  size_t capacity, size_t* count);
/* bcnq-feedback format; BCNQ_NOT_STABILIZABLE when there is no feedback. */
BCNQ_API bcnq_status bcnq_feedback_to_text(const bcnq_feedback* fb, char** out);

/* ---- simulation -------------------------------------------------------- */

/* trajectory[0..steps] under the closed loop u = K x. */
BCNQ_API bcnq_status bcnq_simulate_feedback(const bcnq_network* net, const bcnq_feedback* fb,
                                            size_t x0, size_t steps, size_t* trajectory);
/* trajectory[0..count] under the input sequence inputs[0..count-1]. */
BCNQ_API bcnq_status bcnq_simulate_inputs(const bcnq_network* net, size_t x0,
                                          const size_t* inputs, size_t count,
                                          size_t* trajectory);

/* ---- optimal control --------------------------------------------------- */

BCNQ_API bcnq_status bcnq_cost_load(const char* path, bcnq_cost** out);
BCNQ_API bcnq_status bcnq_cost_parse(const char* text, bcnq_cost** out);
BCNQ_API void bcnq_cost_free(bcnq_cost* cost);
/* States grouped by identical (g, l(1,.), ..., l(M,.)). */
BCNQ_API bcnq_status bcnq_cost_partition(const bcnq_cost* cost, bcnq_partition** out);

/* Minimizes the finite-horizon cost from x0. With `via_quotient` the problem
 * is solved on the quotient by the largest congruence inside the cost
 * partition; the inputs are valid for `net` with the same cost. */
BCNQ_API bcnq_status bcnq_optimal_control(const bcnq_network* net, const bcnq_cost* cost,
                                          size_t x0, size_t horizon, int via_quotient,
                                          bcnq_class_order order, bcnq_solution** out);
BCNQ_API void bcnq_solution_free(bcnq_solution* sol);

BCNQ_API size_t bcnq_solution_horizon(const bcnq_solution* sol);
/* Copies the `horizon` optimal inputs. */
BCNQ_API bcnq_status bcnq_solution_inputs(const bcnq_solution* sol, size_t* buffer,
                                          size_t capacity);
/* Optimal cost as "p" or "p/q". */
BCNQ_API bcnq_status bcnq_solution_cost(const bcnq_solution* sol, char** out);
BCNQ_API size_t bcnq_solution_quotient_states(const bcnq_solution* sol);
/* Class of x0 when solved on a quotient, 0 otherwise. */
BCNQ_API size_t bcnq_solution_quotient_x0(const bcnq_solution* sol);
BCNQ_API bcnq_status bcnq_solution_to_text(const bcnq_solution* sol, char** out);

/* ---- benchmark --------------------------------------------------------- */

typedef struct bcnq_bench_config {
  size_t count;
  size_t n_bits;
  size_t m_bits;
  const size_t* target_sizes;
  size_t n_target_sizes;
  size_t horizon;
  uint64_t seed;
  /* 0: each variable reads `in_degree` random nodes; 1: uniform columns. */
  int model;
  size_t in_degree;
  size_t jobs;
} bcnq_bench_config;

/* Fills `config` with the defaults (one instance, n = 11, m = 5, k = 1 and
 * 100, T = 40, seed 1, random-wiring model with in-degree 2, one job). */
BCNQ_API void bcnq_bench_defaults(bcnq_bench_config* config);
/* Runs the benchmark and renders the report as text (`json` = 0) or JSON.
 * `*all_match` receives 1 when every instance ran and both paths agreed. */
BCNQ_API bcnq_status bcnq_bench_run(const bcnq_bench_config* config, int json, int with_timing,
                                    char** report, int* all_match);

#ifdef __cplusplus
}
#endif

#endif
