/* Licensed under the Apache License 2.0 (see LICENSE file). */

/* C interface to the covert-node discovery library.
 *
 * Objects are opaque handles created by *_new / *_load / producing calls and
 * released with the matching *_free (NULL is accepted). Every fallible call
 * returns a covert_status; on failure a message describing the problem is
 * available from covert_last_error() on the calling thread until the next
 * failing call.
 *
 * Strings are returned through caller buffers: `buf` receives at most
 * `capacity` bytes including the terminating NUL, and `*required` (when not
 * NULL) is set to the full length plus one, so a NULL/0 buffer can be used to
 * size the real call. */

#ifndef COVERT_COVERT_H
#define COVERT_COVERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(COVERT_BUILDING_LIBRARY)
#define COVERT_API __attribute__((visibility("default")))
#else
#define COVERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum covert_status {
  COVERT_OK = 0,
  COVERT_ERR_INVALID_ARGUMENT = 1, /* bad value, config key or null handle */
  COVERT_ERR_OUT_OF_RANGE = 2,     /* index past the end */
  COVERT_ERR_IO = 3,               /* file could not be read or written */
  COVERT_ERR_PARSE = 4,            /* malformed input file */
  COVERT_ERR_NUMERIC = 5,          /* e.g. a log with zero probability */
  COVERT_ERR_STATE = 6,            /* e.g. evaluation without target logs */
  COVERT_ERR_INTERNAL = 7
} covert_status;

typedef struct covert_config covert_config;
typedef struct covert_graph covert_graph;
typedef struct covert_dataset covert_dataset;
typedef struct covert_fit covert_fit;
typedef struct covert_ranking covert_ranking;
typedef struct covert_curves covert_curves;
typedef struct covert_experiment covert_experiment;

COVERT_API const char* covert_last_error(void);
COVERT_API const char* covert_status_name(covert_status status);
COVERT_API const char* covert_version(void);

/* ---- configuration: the flat key/value schema shared with config files ---- */

COVERT_API covert_status covert_config_new(covert_config** out);
COVERT_API void covert_config_free(covert_config* cfg);
/* Replaces every setting with defaults overridden by the file's keys. */
COVERT_API covert_status covert_config_load(covert_config* cfg, const char* path);
COVERT_API covert_status covert_config_set(covert_config* cfg, const char* key, const char* value);
COVERT_API covert_status covert_config_get(const covert_config* cfg, const char* key, char* buf, size_t capacity,
                                           size_t* required);
/* All settings as "key = value" lines; loading this text reproduces cfg. */
COVERT_API covert_status covert_config_format(const covert_config* cfg, char* buf, size_t capacity,
                                              size_t* required);
COVERT_API covert_status covert_config_validate(const covert_config* cfg);
COVERT_API size_t covert_config_seed_count(const covert_config* cfg);
COVERT_API covert_status covert_config_seed(const covert_config* cfg, size_t index, uint64_t* out);

/* ---- graphs ---- */

/* The configured edge list, or a network synthesized with `seed`. */
COVERT_API covert_status covert_graph_build(const covert_config* cfg, uint64_t seed, covert_graph** out);
/* `clusters_path` may be NULL. */
COVERT_API covert_status covert_graph_load(const char* edges_path, const char* clusters_path, covert_graph** out);
COVERT_API covert_status covert_graph_save(const covert_graph* g, const char* edges_path, const char* clusters_path);
COVERT_API void covert_graph_free(covert_graph* g);
COVERT_API size_t covert_graph_node_count(const covert_graph* g);
COVERT_API size_t covert_graph_edge_count(const covert_graph* g);
COVERT_API covert_status covert_graph_degree(const covert_graph* g, size_t node, size_t* out);
COVERT_API covert_status covert_graph_label(const covert_graph* g, size_t node, char* buf, size_t capacity,
                                            size_t* required);
/* Average degree, average clustering coefficient and degree Gini coefficient. */
COVERT_API covert_status covert_graph_stats(const covert_graph* g, double* avg_degree, double* avg_clustering,
                                            double* gini);
/* Comma-separated labels of the covert set the config's "covert" key picks. */
COVERT_API covert_status covert_graph_covert_labels(const covert_graph* g, const covert_config* cfg, char* buf,
                                                    size_t capacity, size_t* required);

/* ---- surveillance logs ---- */

/* Draws the configured number of activity patterns on g and hides the covert
 * set; the patterns are kept as ground truth. */
COVERT_API covert_status covert_dataset_generate(const covert_graph* g, const covert_config* cfg, uint64_t seed,
                                                 covert_dataset** out);
/* `truth_path` may be NULL (no ground truth). */
COVERT_API covert_status covert_dataset_load(const char* logs_path, const char* truth_path, covert_dataset** out);
COVERT_API covert_status covert_dataset_save(const covert_dataset* ds, const char* logs_path, const char* truth_path);
COVERT_API void covert_dataset_free(covert_dataset* ds);
COVERT_API size_t covert_dataset_log_count(const covert_dataset* ds);
COVERT_API size_t covert_dataset_node_count(const covert_dataset* ds);
/* Number of logs whose pattern involved a covert node; needs ground truth. */
COVERT_API covert_status covert_dataset_target_count(const covert_dataset* ds, size_t* out);

/* ---- ranking ---- */

/* `method` is "mle", "heuristic" or "heuristic:C". For "mle", `fit_out` (may
 * be NULL) receives the fitted parameters. */
COVERT_API covert_status covert_rank(const covert_dataset* ds, const covert_config* cfg, const char* method,
                                     uint64_t seed, covert_ranking** out, covert_fit** fit_out);
COVERT_API covert_status covert_ranking_load(const char* path, covert_ranking** out);
COVERT_API covert_status covert_ranking_save(const covert_ranking* r, const char* path);
COVERT_API void covert_ranking_free(covert_ranking* r);
COVERT_API size_t covert_ranking_size(const covert_ranking* r);
/* Log index and score at 0-based rank position. */
COVERT_API covert_status covert_ranking_entry(const covert_ranking* r, size_t position, size_t* log_index,
                                              double* score);

COVERT_API void covert_fit_free(covert_fit* fit);
COVERT_API covert_status covert_fit_summary(const covert_fit* fit, size_t* iterations, int* converged,
                                            double* initial_log_likelihood, double* final_log_likelihood);
/* Writes f as "label,f" rows and r as a labelled matrix; labels come from ds. */
COVERT_API covert_status covert_fit_save(const covert_fit* fit, const covert_dataset* ds, const char* initiation_path,
                                         const char* transmission_path);

/* ---- evaluation ---- */

COVERT_API covert_status covert_evaluate(const covert_ranking* r, const covert_dataset* ds, covert_curves** out);
COVERT_API covert_status covert_curves_save(const covert_curves* c, const char* path);
COVERT_API void covert_curves_free(covert_curves* c);
COVERT_API size_t covert_curves_length(const covert_curves* c);
COVERT_API size_t covert_curves_targets(const covert_curves* c);
/* Row `index` (D_r = index + 1): precision, recall, F for the ranking, the
 * theoretical limit and the random baseline, nine values in that order. */
COVERT_API covert_status covert_curves_row(const covert_curves* c, size_t index, double values[9]);

/* ---- end-to-end experiments ---- */

/* The experiment keeps a copy of cfg; later changes to cfg do not affect it. */
COVERT_API covert_status covert_experiment_run(const covert_config* cfg, covert_experiment** out);
/* Per-seed files, mean and spread curves, plot script and manifest. */
COVERT_API covert_status covert_experiment_write(const covert_experiment* e, const char* out_dir);
COVERT_API covert_status covert_experiment_describe(const covert_experiment* e, char* buf, size_t capacity,
                                                    size_t* required);
COVERT_API void covert_experiment_free(covert_experiment* e);

#ifdef __cplusplus
}
#endif

#endif /* COVERT_COVERT_H */
