#include "clickseg/clickseg.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cbow.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "log_ingest.hpp"
#include "segmenter.hpp"
#include "trace_sampler.hpp"
#include "transition_system.hpp"

using namespace clickseg;

struct csg_event_log {
  EventLog log;
  Diagnostics diag;
};

struct csg_link_graph {
  LinkGraph graph;
  Diagnostics diag;
};

struct csg_transition_system {
  WeightedTransitionSystem ts;
  Diagnostics diag;
};

struct csg_training_log {
  TrainingLog log;
  Diagnostics diag;
};

struct csg_model {
  CbowModel model;
  std::vector<double> epoch_loss;
  std::uint64_t seed = 0;
};

struct csg_segmented_log {
  SegmentedLog log;
  Diagnostics diag;
};

struct csg_dfg {
  Dfg dfg;
};

namespace {

thread_local std::string last_error;

csg_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return CSG_ERROR_INVALID_ARGUMENT;
    case ErrorKind::config: return CSG_ERROR_CONFIG;
    case ErrorKind::io: return CSG_ERROR_IO;
    case ErrorKind::parse: return CSG_ERROR_PARSE;
    case ErrorKind::schema: return CSG_ERROR_SCHEMA;
    case ErrorKind::degenerate: return CSG_ERROR_DEGENERATE;
    case ErrorKind::vocabulary: return CSG_ERROR_VOCABULARY;
    case ErrorKind::version: return CSG_ERROR_VERSION;
  }
  return CSG_ERROR_INTERNAL;
}

template <class F>
csg_status guard(F&& body) noexcept {
  try {
    body();
    last_error.clear();
    return CSG_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return CSG_ERROR_INTERNAL;
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorKind::invalid_argument, what);
}

std::ifstream open_in(const char* path) {
  require(path != nullptr, "path is NULL");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, std::string("cannot open '") + path + "' for reading");
  return in;
}

std::string read_file(const char* path) {
  auto in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class Writer>
void write_file(const char* path, Writer&& write) {
  require(path != nullptr, "path is NULL");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, std::string("cannot open '") + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw Error(ErrorKind::io, std::string("failed writing '") + path + "'");
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

ColumnSchema to_schema(const csg_schema* s) {
  ColumnSchema schema;
  if (!s) return schema;
  if (s->timestamp_column) schema.timestamp = s->timestamp_column;
  if (s->activity_column) schema.activity = s->activity_column;
  if (s->user_column) schema.user = s->user_column;
  if (s->delimiter != '\0') schema.delimiter = s->delimiter;
  return schema;
}

std::vector<std::string> to_strings(const char* const* items, std::size_t count) {
  require(items != nullptr || count == 0, "string array is NULL");
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    require(items[k] != nullptr, "string array holds NULL");
    out.emplace_back(items[k]);
  }
  return out;
}

EndMode to_end_mode(csg_end_mode mode) {
  if (mode == CSG_END_LOCAL) return EndMode::local;
  if (mode == CSG_END_GLOBAL) return EndMode::global;
  throw Error(ErrorKind::config, "unknown end mode");
}

Aggregation to_aggregation(csg_aggregation a) {
  if (a == CSG_AGGREGATE_MEAN) return Aggregation::mean;
  if (a == CSG_AGGREGATE_MEDIAN) return Aggregation::median;
  throw Error(ErrorKind::config, "unknown aggregation");
}

SegmentationParams to_params(const csg_segment_options* o) {
  SegmentationParams p;
  if (!o) return p;
  p.b1 = o->b1;
  p.b2 = o->b2;
  p.b3 = o->b3;
  p.k = o->k;
  if (o->neighborhood == CSG_NEIGHBORHOOD_K) p.neighborhood = Neighborhood::k_terms;
  else if (o->neighborhood == CSG_NEIGHBORHOOD_K_PLUS_1) p.neighborhood = Neighborhood::k_plus_1_terms;
  else throw Error(ErrorKind::config, "unknown neighborhood");
  p.validate();
  return p;
}

std::vector<const CbowModel*> to_models(const csg_model* const* models, std::size_t n) {
  require(models != nullptr && n > 0, "at least one model is required");
  std::vector<const CbowModel*> out;
  for (std::size_t k = 0; k < n; ++k) {
    require(models[k] != nullptr, "model array holds NULL");
    out.push_back(&models[k]->model);
  }
  return out;
}

void fill(const Diagnostics& d, csg_diagnostics* out) {
  if (!out) return;
  *out = csg_diagnostics{d.dropped_prelogin,       d.empty_streams,      d.forced_endings,  d.max_length_stops,
                         d.discarded_short_traces, d.unknown_activities, d.unscorable_gaps};
}

}  // namespace

extern "C" {

const char* csg_last_error(void) { return last_error.c_str(); }

const char* csg_status_name(csg_status status) {
  switch (status) {
    case CSG_OK: return "ok";
    case CSG_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case CSG_ERROR_CONFIG: return "configuration error";
    case CSG_ERROR_IO: return "i/o error";
    case CSG_ERROR_PARSE: return "parse error";
    case CSG_ERROR_SCHEMA: return "schema error";
    case CSG_ERROR_DEGENERATE: return "degenerate model";
    case CSG_ERROR_VOCABULARY: return "vocabulary error";
    case CSG_ERROR_VERSION: return "version mismatch";
    case CSG_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* csg_version(void) { return "0.1.0"; }

void csg_string_free(char* text) { std::free(text); }

// ---- event logs

void csg_schema_init(csg_schema* schema) {
  if (schema) *schema = csg_schema{"timestamp", "screen", "user", ','};
}

csg_status csg_event_log_read(const char* path, const csg_schema* schema, csg_event_log** out) {
  return guard([&] {
    require(out != nullptr, "out is NULL");
    auto in = open_in(path);
    auto handle = std::make_unique<csg_event_log>();
    handle->log = parse_event_log(in, to_schema(schema), &handle->diag);
    *out = handle.release();
  });
}

csg_status csg_event_log_parse(const char* text, size_t length, const csg_schema* schema, csg_event_log** out) {
  return guard([&] {
    require(out != nullptr && (text != nullptr || length == 0), "NULL argument");
    auto handle = std::make_unique<csg_event_log>();
    handle->log = parse_event_log(std::string_view(text ? text : "", length), to_schema(schema), &handle->diag);
    *out = handle.release();
  });
}

csg_status csg_event_log_write(const csg_event_log* log, const char* path) {
  return guard([&] {
    require(log != nullptr, "log is NULL");
    write_file(path, [&](std::ostream& out) { write_event_log(out, log->log); });
  });
}

size_t csg_event_log_size(const csg_event_log* log) { return log ? log->log.events.size() : 0; }

size_t csg_event_log_user_count(const csg_event_log* log) {
  if (!log) return 0;
  std::set<std::string_view> users;
  for (const auto& e : log->log.events) users.insert(e.user);
  return users.size();
}

int csg_event_log_has_column(const csg_event_log* log, const char* name) {
  return log && name && log->log.has_column(name) ? 1 : 0;
}

void csg_event_log_diagnostics(const csg_event_log* log, csg_diagnostics* out) {
  if (log) fill(log->diag, out);
}

void csg_event_log_free(csg_event_log* log) { delete log; }

// ---- link graphs

csg_status csg_link_graph_read(const char* path, csg_link_graph** out) {
  return guard([&] {
    require(out != nullptr, "out is NULL");
    const auto text = read_file(path);
    auto handle = std::make_unique<csg_link_graph>();
    handle->graph = parse_link_graph(text, &handle->diag);
    *out = handle.release();
  });
}

csg_status csg_link_graph_parse(const char* text, size_t length, csg_link_graph** out) {
  return guard([&] {
    require(out != nullptr && (text != nullptr || length == 0), "NULL argument");
    auto handle = std::make_unique<csg_link_graph>();
    handle->graph = parse_link_graph(std::string_view(text ? text : "", length), &handle->diag);
    *out = handle.release();
  });
}

size_t csg_link_graph_vertex_count(const csg_link_graph* graph) { return graph ? graph->graph.vertices.size() : 0; }
size_t csg_link_graph_edge_count(const csg_link_graph* graph) { return graph ? graph->graph.edges.size() : 0; }
void csg_link_graph_free(csg_link_graph* graph) { delete graph; }

// ---- transition systems

csg_status csg_ts_build(const csg_event_log* log, size_t window, csg_transition_system** out) {
  return guard([&] {
    require(log != nullptr && out != nullptr, "NULL argument");
    Diagnostics diag;
    const auto streams = split_by_user(log->log);
    auto ts = build_merged_ts(streams, window, &diag);
    *out = new csg_transition_system{std::move(ts), std::move(diag)};
  });
}

csg_status csg_ts_filter_rare(csg_transition_system* ts, uint64_t epsilon, csg_prune_report* report) {
  return guard([&] {
    require(ts != nullptr, "ts is NULL");
    PruneReport r;
    ts->ts = filter_rare(ts->ts, epsilon, &r);
    if (report) *report = csg_prune_report{r.rejected_transitions, r.unreachable_states, r.unreachable_transitions};
  });
}

csg_status csg_ts_prune(csg_transition_system* ts, const csg_link_graph* graph, csg_prune_report* report) {
  return guard([&] {
    require(ts != nullptr && graph != nullptr, "NULL argument");
    PruneReport r;
    ts->ts = prune_with_link_graph(ts->ts, graph->graph, &r);
    if (report) *report = csg_prune_report{r.rejected_transitions, r.unreachable_states, r.unreachable_transitions};
  });
}

void csg_ts_stats_get(const csg_transition_system* ts, csg_ts_stats* out) {
  if (ts && out) *out = csg_ts_stats{ts->ts.state_count(), ts->ts.transition_count()};
}

csg_status csg_ts_end_probability(const csg_transition_system* ts, const char* const* activities, size_t count,
                                  csg_end_mode mode, double* out) {
  return guard([&] {
    require(ts != nullptr && out != nullptr, "NULL argument");
    const auto state = ts->ts.find_state(to_strings(activities, count));
    *out = state ? l_end(ts->ts, *state, to_end_mode(mode)) : 0.0;
  });
}

csg_status csg_ts_path_likelihood(const csg_transition_system* ts, const char* const* activities, size_t count,
                                  csg_end_mode mode, double* out) {
  return guard([&] {
    require(ts != nullptr && out != nullptr, "NULL argument");
    const auto labels = to_strings(activities, count);
    *out = path_likelihood(ts->ts, std::span<const std::string>(labels), to_end_mode(mode));
  });
}

csg_status csg_ts_to_dot(const csg_transition_system* ts, char** out) {
  return guard([&] {
    require(ts != nullptr && out != nullptr, "NULL argument");
    *out = dup_string(to_dot(ts->ts));
  });
}

void csg_ts_diagnostics(const csg_transition_system* ts, csg_diagnostics* out) {
  if (ts) fill(ts->diag, out);
}

void csg_ts_free(csg_transition_system* ts) { delete ts; }

// ---- training logs

void csg_sampler_options_init(csg_sampler_options* options) {
  if (options) *options = csg_sampler_options{10000, 50, 2, CSG_END_LOCAL, 1, 1};
}

csg_status csg_training_log_generate(const csg_transition_system* ts, const csg_sampler_options* options,
                                     csg_training_log** out) {
  return guard([&] {
    require(ts != nullptr && options != nullptr && out != nullptr, "NULL argument");
    SamplerOptions so;
    so.max_length = options->max_length;
    so.min_length = options->min_length;
    so.end_mode = to_end_mode(options->end_mode);
    if (so.max_length == 0) throw Error(ErrorKind::config, "sampler.max_len must be >= 1");
    auto handle = std::make_unique<csg_training_log>();
    handle->log = generate_training_log(ts->ts, options->traces, options->seed, so, options->threads, &handle->diag);
    *out = handle.release();
  });
}

csg_status csg_training_log_read(const char* path, csg_training_log** out) {
  return guard([&] {
    require(out != nullptr, "out is NULL");
    auto in = open_in(path);
    auto handle = std::make_unique<csg_training_log>();
    handle->log = read_training_log(in);
    *out = handle.release();
  });
}

csg_status csg_training_log_write(const csg_training_log* log, const char* path) {
  return guard([&] {
    require(log != nullptr, "log is NULL");
    write_file(path, [&](std::ostream& out) { write_training_log(out, log->log); });
  });
}

size_t csg_training_log_size(const csg_training_log* log) { return log ? log->log.traces.size() : 0; }

void csg_training_log_diagnostics(const csg_training_log* log, csg_diagnostics* out) {
  if (log) fill(log->diag, out);
}

void csg_training_log_free(csg_training_log* log) { delete log; }

// ---- models

void csg_train_options_init(csg_train_options* options) {
  if (options) *options = csg_train_options{32, 1, 5, 0.025, 0.0001, 1, 10};
}

csg_status csg_model_train_ensemble(const csg_training_log* log, const csg_train_options* options, size_t members,
                                    unsigned threads, csg_model** out) {
  return guard([&] {
    require(log != nullptr && options != nullptr && out != nullptr, "NULL argument");
    require(members > 0, "ensemble needs at least one member");
    TrainConfig base;
    base.dim = options->dim;
    base.radius = options->radius;
    base.epochs = options->epochs;
    base.learning_rate = options->learning_rate;
    base.min_learning_rate = options->min_learning_rate;
    base.seed = options->seed;
    base.traces_per_sequence = options->traces_per_sequence;
    base.validate();

    std::vector<std::unique_ptr<csg_model>> results(members);
    std::vector<std::exception_ptr> errors(members);
    auto run = [&](std::size_t j) {
      try {
        TrainConfig config = base;
        config.seed = base.seed + j;
        auto r = train(config, log->log);
        results[j].reset(new csg_model{std::move(r.model), std::move(r.epoch_loss), config.seed});
      } catch (...) {
        errors[j] = std::current_exception();
      }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members)));
    if (workers == 1) {
      for (std::size_t j = 0; j < members; ++j) run(j);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t j = w; j < members; j += workers) run(j);
        });
      }
      for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t j = 0; j < members; ++j) out[j] = results[j].release();
  });
}

csg_status csg_model_save(const csg_model* model, const char* path) {
  return guard([&] {
    require(model != nullptr, "model is NULL");
    write_file(path, [&](std::ostream& out) { save_model(out, model->model); });
  });
}

csg_status csg_model_load(const char* path, csg_model** out) {
  return guard([&] {
    require(out != nullptr, "out is NULL");
    auto in = open_in(path);
    *out = new csg_model{load_model(in), {}, 0};
  });
}

size_t csg_model_vocab_size(const csg_model* model) { return model ? model->model.vocab().size() : 0; }

const char* csg_model_vocab_label(const csg_model* model, size_t index) {
  if (!model || index >= model->model.vocab().size()) return nullptr;
  return model->model.vocab().label(index).c_str();
}

uint64_t csg_model_seed(const csg_model* model) { return model ? model->seed : 0; }

size_t csg_model_epoch_losses(const csg_model* model, double* out, size_t capacity) {
  if (!model) return 0;
  const auto& loss = model->epoch_loss;
  for (std::size_t k = 0; out && k < std::min(capacity, loss.size()); ++k) out[k] = loss[k];
  return loss.size();
}

csg_status csg_model_predict_center(const csg_model* model, const char* const* context, size_t count,
                                    double* probabilities, size_t capacity) {
  return guard([&] {
    require(model != nullptr && probabilities != nullptr, "NULL argument");
    require(capacity >= model->model.vocab().size(), "probability buffer too small");
    const auto tokens = to_strings(context, count);
    require(!tokens.empty(), "empty context");
    const auto probs = predict_center(model->model, tokens);
    std::copy(probs.begin(), probs.end(), probabilities);
  });
}

csg_status csg_boundary_scores(const csg_model* const* models, size_t n_models, const char* const* activities,
                               size_t count, csg_aggregation aggregation, double* scores, size_t capacity) {
  return guard([&] {
    const auto members = to_models(models, n_models);
    const auto labels = to_strings(activities, count);
    const auto s = boundary_scores(members, labels, to_aggregation(aggregation));
    require(capacity >= s.size(), "score buffer too small");
    std::copy(s.begin(), s.end(), scores);
  });
}

void csg_model_free(csg_model* model) { delete model; }

// ---- segmentation

void csg_segment_options_init(csg_segment_options* options) {
  if (options) *options = csg_segment_options{1.2, 1.2, 1.5, 5, CSG_NEIGHBORHOOD_K, CSG_AGGREGATE_MEAN, 1, 0};
}

csg_status csg_detect_boundaries(const double* scores, size_t count, const csg_segment_options* options,
                                 size_t* positions, size_t capacity, size_t* found) {
  return guard([&] {
    require(scores != nullptr || count == 0, "scores is NULL");
    require(found != nullptr, "found is NULL");
    const auto b = detect_boundaries(std::span<const double>(scores, count), to_params(options));
    *found = b.size();
    for (std::size_t k = 0; positions && k < std::min(capacity, b.size()); ++k) positions[k] = b[k];
  });
}

csg_status csg_segment(const csg_event_log* log, const csg_model* const* models, size_t n_models,
                       const csg_segment_options* options, csg_segmented_log** out) {
  return guard([&] {
    require(log != nullptr && options != nullptr && out != nullptr, "NULL argument");
    if (log->log.has_column(kCaseColumn)) {
      throw Error(ErrorKind::schema, "log already has a '" + std::string(kCaseColumn) + "' column (already segmented)");
    }
    const auto members = to_models(models, n_models);
    for (const auto* m : members) {
      if (!(m->vocab() == members.front()->vocab())) {
        throw Error(ErrorKind::vocabulary, "ensemble members have different vocabularies");
      }
    }
    if (options->strict_vocabulary) {
      for (const auto& e : log->log.events) {
        if (!members.front()->vocab().find(e.activity)) {
          throw Error(ErrorKind::vocabulary, "activity '" + e.activity + "' is not in the model vocabulary");
        }
      }
    }
    auto handle = std::make_unique<csg_segmented_log>();
    handle->log = segment_log(log->log, members, to_params(options), to_aggregation(options->aggregation),
                              options->threads, &handle->diag);
    *out = handle.release();
  });
}

csg_status csg_segmented_log_write(const csg_segmented_log* log, const char* path) {
  return guard([&] {
    require(log != nullptr, "log is NULL");
    write_file(path, [&](std::ostream& out) { write_segmented_log(out, log->log); });
  });
}

csg_status csg_segmented_log_read(const char* path, const csg_schema* schema, csg_segmented_log** out) {
  return guard([&] {
    require(out != nullptr, "out is NULL");
    auto in = open_in(path);
    auto handle = std::make_unique<csg_segmented_log>();
    handle->log = read_segmented_log(in, to_schema(schema));
    *out = handle.release();
  });
}

size_t csg_segmented_log_event_count(const csg_segmented_log* log) {
  if (!log) return 0;
  std::size_t n = 0;
  for (const auto& c : log->log.cases) n += c.events.size();
  return n;
}

void csg_segmented_log_stats(const csg_segmented_log* log, csg_case_stats* out) {
  if (!log || !out) return;
  const auto s = case_statistics(log->log);
  *out = csg_case_stats{s.cases, s.mean_length, s.median_length, s.mean_duration_seconds, s.median_duration_seconds};
}

csg_status csg_segmented_log_events(const csg_segmented_log* log, csg_event_log** out) {
  return guard([&] {
    require(log != nullptr && out != nullptr, "NULL argument");
    auto handle = std::make_unique<csg_event_log>();
    handle->log = to_event_log(log->log);
    *out = handle.release();
  });
}

void csg_segmented_log_diagnostics(const csg_segmented_log* log, csg_diagnostics* out) {
  if (log) fill(log->diag, out);
}

csg_status csg_segmented_log_unknown_activities(const csg_segmented_log* log, char** out) {
  return guard([&] {
    require(log != nullptr && out != nullptr, "NULL argument");
    std::string joined;
    for (const auto& label : log->diag.unknown_labels) {
      if (!joined.empty()) joined += ',';
      joined += label;
    }
    *out = dup_string(joined);
  });
}

void csg_segmented_log_free(csg_segmented_log* log) { delete log; }

// ---- evaluation

csg_status csg_boundary_metrics(const csg_segmented_log* predicted, const csg_segmented_log* truth, size_t tolerance,
                                csg_metrics* out) {
  return guard([&] {
    require(predicted != nullptr && truth != nullptr && out != nullptr, "NULL argument");
    const auto m = boundary_metrics(predicted->log, truth->log, tolerance);
    *out = csg_metrics{m.precision, m.recall, m.f1, m.n_true, m.n_predicted, m.tolerance};
  });
}

csg_status csg_metrics_to_json(const csg_metrics* metrics, char** out) {
  return guard([&] {
    require(metrics != nullptr && out != nullptr, "NULL argument");
    BoundaryMetrics m;
    m.precision = metrics->precision;
    m.recall = metrics->recall;
    m.f1 = metrics->f1;
    m.n_true = metrics->n_true;
    m.n_predicted = metrics->n_predicted;
    m.tolerance = metrics->tolerance;
    *out = dup_string(metrics_json(m));
  });
}

void csg_synth_options_init(csg_synth_options* options) {
  if (options) *options = csg_synth_options{10, 1, 5, 1, 50, 1.0, 1};
}

csg_status csg_synthesize(const csg_link_graph* graph, const char* const* starts, size_t n_starts,
                          const char* const* ends, size_t n_ends, const csg_synth_options* options,
                          csg_segmented_log** out) {
  return guard([&] {
    require(graph != nullptr && options != nullptr && out != nullptr, "NULL argument");
    LinkGraphWalker::Options wo;
    wo.starts = to_strings(starts, n_starts);
    wo.ends = to_strings(ends, n_ends);
    wo.min_length = options->min_length;
    wo.max_length = options->max_length;
    wo.stop_probability = options->stop_probability;
    const LinkGraphWalker walker(graph->graph, wo);

    SynthesisOptions so;
    so.users = options->users;
    so.min_cases = options->min_cases;
    so.max_cases = options->max_cases;
    so.seed = options->seed;
    auto truth = synthesize_ground_truth(std::cref(walker), so);
    auto handle = std::make_unique<csg_segmented_log>();
    handle->log = std::move(truth.cases);
    *out = handle.release();
  });
}

csg_status csg_dfg_discover(const csg_segmented_log* log, size_t min_arc_frequency, csg_dfg** out) {
  return guard([&] {
    require(log != nullptr && out != nullptr, "NULL argument");
    *out = new csg_dfg{discover_dfg(log->log, min_arc_frequency)};
  });
}

size_t csg_dfg_node_count(const csg_dfg* dfg) { return dfg ? dfg->dfg.nodes.size() : 0; }
size_t csg_dfg_arc_count(const csg_dfg* dfg) { return dfg ? dfg->dfg.arcs.size() : 0; }

csg_status csg_dfg_to_dot(const csg_dfg* dfg, char** out) {
  return guard([&] {
    require(dfg != nullptr && out != nullptr, "NULL argument");
    *out = dup_string(export_dot(dfg->dfg));
  });
}

void csg_dfg_free(csg_dfg* dfg) { delete dfg; }

}  // extern "C"
