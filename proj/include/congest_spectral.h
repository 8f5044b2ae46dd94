/* C interface to the congest-spectral library: graph construction, exact
 * spectral/cut oracles, and the distributed estimators. All functions are
 * synchronous and thread-compatible (distinct graphs may be used from
 * distinct threads concurrently; a single cs_graph is immutable after
 * creation and safe to share).
 *
 * Every function that can fail returns a cs_status; CS_OK is zero. On
 * failure, cs_last_error() returns a thread-local human-readable message
 * valid until the next failing call on the same thread. Strings returned
 * through char** out-parameters are heap-allocated; release them with
 * cs_string_free. */

#ifndef CONGEST_SPECTRAL_H
#define CONGEST_SPECTRAL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_INVALID_ARGUMENT = 1,
  CS_ERR_PARSE = 2,
  CS_ERR_DISCONNECTED = 3,
  CS_ERR_SIZE_LIMIT = 4,
  CS_ERR_NUMERIC = 5,
  CS_ERR_BUDGET_VIOLATION = 6,
  CS_ERR_RESTART_EXHAUSTED = 7,
  CS_ERR_MAX_ROUNDS = 8,
  CS_ERR_UNKNOWN = 9
} cs_status;

/* Stable identifier for a status, e.g. "CS_ERR_PARSE". */
const char* cs_status_name(cs_status s);

/* Message from the most recent failing call on this thread, or "" if none. */
const char* cs_last_error(void);

typedef struct cs_graph cs_graph;

/* Edge-list text: first line "n m", then m lines "u v [w]"; '#' comments.
 * oracle_mode nonzero admits disconnected graphs (oracle use only). */
cs_status cs_graph_parse(const char* text, int oracle_mode, cs_graph** out);

/* family: cycle | clique | path | star | cycle_clique | cycle_two_cliques |
 * barbell | path_clique_star | bridged_cliques. params carries the family's
 * exact arity. */
cs_status cs_graph_generate(const char* family, const long* params, int n_params,
                            cs_graph** out);

cs_status cs_graph_write(const cs_graph* g, char** out_text);
int cs_graph_vertex_count(const cs_graph* g);
int cs_graph_edge_count(const cs_graph* g);
void cs_graph_free(cs_graph* g);

typedef struct cs_options {
  double eps;            /* target accuracy, (0, 2] */
  uint64_t seed;
  double c1, c2, c3, c4; /* iteration / instance / probe / projection constants */
  long t_max;
  long budget_bits;      /* 0 = default 32*ceil(log2 n) */
  int mantissa_bits;     /* 0 = default 2*ceil(log2 n) + 8 */
  long max_rounds;
  int full_precision;    /* nonzero: untruncated reference messages */
  int max_restart_waves;
  double c_ho;           /* k-way Cheeger output constant */
  double delta_coef;     /* eigenvalue accuracy per conductance guess */
  double search_floor;   /* 0 = 1/n^3 */
  int k;                 /* arity for lambda_k / phi_k targets */
  double fixed_eps;      /* > 0 pins the k-way inner accuracy (skips search) */
} cs_options;

/* Fills every field with its documented default. */
void cs_options_init(cs_options* o);

/* target: lambda_n | lambda_2 | lambda_k | phi | phi_additive | phi_k.
 * On success *out_json holds the result payload:
 *   eigenvalue targets -> {"which", "value", "eps", "rounds", "instances",
 *                          "early_exit", "restarts", ...}
 *   cut targets        -> {"phi_tilde", "k", "lambda_used", "guarantee",
 *                          "search_trace", "rounds_total", ...}           */
cs_status cs_estimate(const cs_graph* g, const char* target, const cs_options* o,
                      char** out_json);

/* Exact oracle payload {"lambda": [...], "phi": ..., "phi_k": ...,
 * "cheeger_ok": ...}. Spectrum needs n <= 512; phi and the Cheeger check need
 * n <= 24 and are null beyond that; k >= 2 adds brute-force phi_k (n <= 12,
 * k <= 4), k = 0 skips it. */
cs_status cs_exact(const cs_graph* g, int k, char** out_json);

void cs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CONGEST_SPECTRAL_H */
