/*
 * clickseg C API.
 *
 * Segments unlabeled click data into process cases: a weighted transition
 * system is built from per-user streams and pruned with a link graph, a
 * training log is sampled from it, a CBOW model learns where the case
 * boundary token occurs, and peaks of the predicted boundary probability
 * split each user stream into cases.
 *
 * All objects are opaque handles released with their *_free function
 * (passing NULL is allowed). Functions returning csg_status report details
 * of the most recent failure on the calling thread via csg_last_error().
 * Handles are immutable once built unless a function documents otherwise,
 * and may be read from several threads at once.
 */
#ifndef CLICKSEG_CLICKSEG_H
#define CLICKSEG_CLICKSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(CSG_BUILDING_LIBRARY)
#define CSG_API __attribute__((visibility("default")))
#else
#define CSG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csg_status {
  CSG_OK = 0,
  CSG_ERROR_INVALID_ARGUMENT = 1,
  CSG_ERROR_CONFIG = 2,
  CSG_ERROR_IO = 3,
  CSG_ERROR_PARSE = 4,
  CSG_ERROR_SCHEMA = 5,
  CSG_ERROR_DEGENERATE = 6,
  CSG_ERROR_VOCABULARY = 7,
  CSG_ERROR_VERSION = 8,
  CSG_ERROR_INTERNAL = 9
} csg_status;

typedef enum csg_end_mode { CSG_END_LOCAL = 0, CSG_END_GLOBAL = 1 } csg_end_mode;
typedef enum csg_aggregation { CSG_AGGREGATE_MEAN = 0, CSG_AGGREGATE_MEDIAN = 1 } csg_aggregation;
typedef enum csg_neighborhood { CSG_NEIGHBORHOOD_K = 0, CSG_NEIGHBORHOOD_K_PLUS_1 = 1 } csg_neighborhood;

typedef struct csg_event_log csg_event_log;
typedef struct csg_link_graph csg_link_graph;
typedef struct csg_transition_system csg_transition_system;
typedef struct csg_training_log csg_training_log;
typedef struct csg_model csg_model;
typedef struct csg_segmented_log csg_segmented_log;
typedef struct csg_dfg csg_dfg;

/* Message of the last failure on this thread; empty after success. */
CSG_API const char* csg_last_error(void);
CSG_API const char* csg_status_name(csg_status status);
CSG_API const char* csg_version(void);

/* Strings returned through char** out-parameters are released with this. */
CSG_API void csg_string_free(char* text);

/* Counted warnings accumulated while building a handle. */
typedef struct csg_diagnostics {
  size_t dropped_prelogin;
  size_t empty_streams;
  size_t forced_endings;
  size_t max_length_stops;
  size_t discarded_short_traces;
  size_t unknown_activities;
  size_t unscorable_gaps;
} csg_diagnostics;

/* ---- event logs ------------------------------------------------------- */

typedef struct csg_schema {
  const char* timestamp_column; /* default "timestamp" */
  const char* activity_column;  /* default "screen" */
  const char* user_column;      /* default "user" */
  char delimiter;               /* default ',' */
} csg_schema;

CSG_API void csg_schema_init(csg_schema* schema);

/* Rows without a user id are dropped and counted in the diagnostics. */
CSG_API csg_status csg_event_log_read(const char* path, const csg_schema* schema, csg_event_log** out);
CSG_API csg_status csg_event_log_parse(const char* text, size_t length, const csg_schema* schema,
                                       csg_event_log** out);
CSG_API csg_status csg_event_log_write(const csg_event_log* log, const char* path);
CSG_API size_t csg_event_log_size(const csg_event_log* log);
CSG_API size_t csg_event_log_user_count(const csg_event_log* log);
CSG_API int csg_event_log_has_column(const csg_event_log* log, const char* name);
CSG_API void csg_event_log_diagnostics(const csg_event_log* log, csg_diagnostics* out);
CSG_API void csg_event_log_free(csg_event_log* log);

/* ---- link graphs ------------------------------------------------------ */

/* Edge list ("A -> B" lines, '#' comments) or {"vertices": [...], "edges": [["A","B"], ...]}. */
CSG_API csg_status csg_link_graph_read(const char* path, csg_link_graph** out);
CSG_API csg_status csg_link_graph_parse(const char* text, size_t length, csg_link_graph** out);
CSG_API size_t csg_link_graph_vertex_count(const csg_link_graph* graph);
CSG_API size_t csg_link_graph_edge_count(const csg_link_graph* graph);
CSG_API void csg_link_graph_free(csg_link_graph* graph);

/* ---- transition systems ----------------------------------------------- */

typedef struct csg_ts_stats {
  size_t states; /* including the initial state and the final sink */
  size_t transitions;
} csg_ts_stats;

typedef struct csg_prune_report {
  size_t rejected_transitions;
  size_t unreachable_states;
  size_t unreachable_transitions;
} csg_prune_report;

CSG_API csg_status csg_ts_build(const csg_event_log* log, size_t window, csg_transition_system** out);
/* Both replace the system in place; `report` may be NULL. */
CSG_API csg_status csg_ts_filter_rare(csg_transition_system* ts, uint64_t epsilon, csg_prune_report* report);
CSG_API csg_status csg_ts_prune(csg_transition_system* ts, const csg_link_graph* graph, csg_prune_report* report);
CSG_API void csg_ts_stats_get(const csg_transition_system* ts, csg_ts_stats* out);
/* Probability of ending at the state whose window is `activities`
 * (oldest first, count entries); 0 for unknown states. */
CSG_API csg_status csg_ts_end_probability(const csg_transition_system* ts, const char* const* activities,
                                          size_t count, csg_end_mode mode, double* out);
/* Likelihood of replaying `activities` from the initial state to the sink. */
CSG_API csg_status csg_ts_path_likelihood(const csg_transition_system* ts, const char* const* activities,
                                          size_t count, csg_end_mode mode, double* out);
CSG_API csg_status csg_ts_to_dot(const csg_transition_system* ts, char** out);
CSG_API void csg_ts_diagnostics(const csg_transition_system* ts, csg_diagnostics* out);
CSG_API void csg_ts_free(csg_transition_system* ts);

/* ---- training logs ---------------------------------------------------- */

typedef struct csg_sampler_options {
  uint64_t traces;   /* default 10000 */
  size_t max_length; /* default 50 */
  size_t min_length; /* default 2 */
  csg_end_mode end_mode;
  uint64_t seed;
  unsigned threads;
} csg_sampler_options;

CSG_API void csg_sampler_options_init(csg_sampler_options* options);
CSG_API csg_status csg_training_log_generate(const csg_transition_system* ts, const csg_sampler_options* options,
                                             csg_training_log** out);
/* One trace per line, labels separated by spaces. */
CSG_API csg_status csg_training_log_read(const char* path, csg_training_log** out);
CSG_API csg_status csg_training_log_write(const csg_training_log* log, const char* path);
CSG_API size_t csg_training_log_size(const csg_training_log* log);
CSG_API void csg_training_log_diagnostics(const csg_training_log* log, csg_diagnostics* out);
CSG_API void csg_training_log_free(csg_training_log* log);

/* ---- CBOW models ------------------------------------------------------ */

typedef struct csg_train_options {
  size_t dim;                 /* default 32 */
  size_t radius;              /* default 1 */
  size_t epochs;              /* default 5 */
  double learning_rate;       /* default 0.025, decayed linearly */
  double min_learning_rate;   /* default 0.0001 */
  uint64_t seed;              /* member j of an ensemble uses seed + j */
  size_t traces_per_sequence; /* default 10 */
} csg_train_options;

CSG_API void csg_train_options_init(csg_train_options* options);
/* Trains `members` models (seeds seed, seed+1, ...) on up to `threads`
 * threads and stores the handles in out[0..members). */
CSG_API csg_status csg_model_train_ensemble(const csg_training_log* log, const csg_train_options* options,
                                            size_t members, unsigned threads, csg_model** out);
CSG_API csg_status csg_model_save(const csg_model* model, const char* path);
/* Rejects files written with another format version. */
CSG_API csg_status csg_model_load(const char* path, csg_model** out);
CSG_API size_t csg_model_vocab_size(const csg_model* model);
CSG_API const char* csg_model_vocab_label(const csg_model* model, size_t index);
CSG_API uint64_t csg_model_seed(const csg_model* model);
/* Mean training loss per epoch; returns the number of epochs and copies up
 * to `capacity` values. Loaded models report 0 epochs. */
CSG_API size_t csg_model_epoch_losses(const csg_model* model, double* out, size_t capacity);
/* Distribution over the vocabulary (vocab order) for the given context. */
CSG_API csg_status csg_model_predict_center(const csg_model* model, const char* const* context, size_t count,
                                            double* probabilities, size_t capacity);
/* One boundary score per gap of `activities` (count - 1 values). */
CSG_API csg_status csg_boundary_scores(const csg_model* const* models, size_t n_models,
                                       const char* const* activities, size_t count, csg_aggregation aggregation,
                                       double* scores, size_t capacity);
CSG_API void csg_model_free(csg_model* model);

/* ---- segmentation ----------------------------------------------------- */

typedef struct csg_segment_options {
  double b1; /* default 1.2 */
  double b2; /* default 1.2 */
  double b3; /* default 1.5 */
  size_t k;  /* default 5 */
  csg_neighborhood neighborhood;
  csg_aggregation aggregation;
  unsigned threads;
  /* Non-zero: fail on the first activity missing from the vocabulary. */
  int strict_vocabulary;
} csg_segment_options;

typedef struct csg_case_stats {
  size_t cases;
  double mean_length;
  double median_length;
  double mean_duration_seconds;
  double median_duration_seconds;
} csg_case_stats;

CSG_API void csg_segment_options_init(csg_segment_options* options);
/* Writes the 1-based split positions of `scores` into `positions` and
 * stores how many were found in *found (may exceed capacity). */
CSG_API csg_status csg_detect_boundaries(const double* scores, size_t count, const csg_segment_options* options,
                                         size_t* positions, size_t capacity, size_t* found);
CSG_API csg_status csg_segment(const csg_event_log* log, const csg_model* const* models, size_t n_models,
                               const csg_segment_options* options, csg_segmented_log** out);
/* Input columns plus "case_id". */
CSG_API csg_status csg_segmented_log_write(const csg_segmented_log* log, const char* path);
CSG_API csg_status csg_segmented_log_read(const char* path, const csg_schema* schema, csg_segmented_log** out);
CSG_API size_t csg_segmented_log_event_count(const csg_segmented_log* log);
CSG_API void csg_segmented_log_stats(const csg_segmented_log* log, csg_case_stats* out);
/* Unsegmented view of the same events. */
CSG_API csg_status csg_segmented_log_events(const csg_segmented_log* log, csg_event_log** out);
CSG_API void csg_segmented_log_diagnostics(const csg_segmented_log* log, csg_diagnostics* out);
/* Comma-separated unknown activity labels met while segmenting. */
CSG_API csg_status csg_segmented_log_unknown_activities(const csg_segmented_log* log, char** out);
CSG_API void csg_segmented_log_free(csg_segmented_log* log);

/* ---- evaluation ------------------------------------------------------- */

typedef struct csg_metrics {
  double precision;
  double recall;
  double f1;
  size_t n_true;
  size_t n_predicted;
  size_t tolerance;
} csg_metrics;

CSG_API csg_status csg_boundary_metrics(const csg_segmented_log* predicted, const csg_segmented_log* truth,
                                        size_t tolerance, csg_metrics* out);
CSG_API csg_status csg_metrics_to_json(const csg_metrics* metrics, char** out);

typedef struct csg_synth_options {
  size_t users;
  size_t min_cases;
  size_t max_cases;
  size_t min_length;
  size_t max_length;
  double stop_probability;
  uint64_t seed;
} csg_synth_options;

CSG_API void csg_synth_options_init(csg_synth_options* options);
/* Ground-truth log from random walks over `graph` between the given start
 * and end activities. */
CSG_API csg_status csg_synthesize(const csg_link_graph* graph, const char* const* starts, size_t n_starts,
                                  const char* const* ends, size_t n_ends, const csg_synth_options* options,
                                  csg_segmented_log** out);

CSG_API csg_status csg_dfg_discover(const csg_segmented_log* log, size_t min_arc_frequency, csg_dfg** out);
CSG_API size_t csg_dfg_node_count(const csg_dfg* dfg);
CSG_API size_t csg_dfg_arc_count(const csg_dfg* dfg);
CSG_API csg_status csg_dfg_to_dot(const csg_dfg* dfg, char** out);
CSG_API void csg_dfg_free(csg_dfg* dfg);

#ifdef __cplusplus
}
#endif

#endif /* CLICKSEG_CLICKSEG_H */
