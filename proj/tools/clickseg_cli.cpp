#include <clickseg/clickseg.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

using json = nlohmann::json;

enum Command : unsigned {
  kGenerate = 1u << 0,
  kTrain = 1u << 1,
  kSegment = 1u << 2,
  kEval = 1u << 3,
  kDfg = 1u << 4,
  kSynth = 1u << 5,
  kAll = 0x3f,
};

constexpr unsigned kSchemaUsers = kGenerate | kSegment | kEval | kDfg;

struct Field {
  const char* key;
  json value;
  const char* help;
  unsigned commands;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"threads", 1u, "worker threads", kAll},
      {"paths.log", "", "unsegmented event log (CSV); written by synth", kGenerate | kSegment | kSynth},
      {"paths.link_graph", "", "link graph (edge list or JSON)", kGenerate | kSynth},
      {"paths.training_log", "", "training log, one trace per line", kGenerate | kTrain},
      {"paths.ts_dot", "", "optional DOT dump of the pruned transition system", kGenerate},
      {"paths.model", "", "model file; ensembles use <stem>.<j><ext>", kTrain | kSegment},
      {"paths.output", "", "segmented CSV (segment); default input of eval and dfg", kSegment | kEval | kDfg},
      {"paths.truth", "", "ground-truth segmented CSV (eval input, synth output)", kEval | kSynth},
      {"paths.predicted", "", "predicted segmented CSV (defaults to paths.output)", kEval},
      {"paths.metrics", "", "metrics JSON (stdout when empty)", kEval},
      {"paths.dot", "", "DFG DOT output (stdout when empty)", kDfg},
      {"schema.timestamp", "timestamp", "timestamp column", kSchemaUsers},
      {"schema.activity", "screen", "activity column", kSchemaUsers},
      {"schema.user", "user", "user column", kSchemaUsers},
      {"schema.delimiter", ",", "field delimiter (one character or \"tab\")", kSchemaUsers},
      {"ts.window", 2u, "window size w of the state abstraction", kGenerate},
      {"ts.epsilon", 0u, "drop transitions observed fewer than epsilon times", kGenerate},
      {"ts.end_mode", "local", "end probability: local or global", kGenerate},
      {"sampler.n", 10000u, "number of sampled traces", kGenerate},
      {"sampler.max_len", 50u, "maximum trace length", kGenerate},
      {"sampler.min_len", 2u, "shorter traces are discarded and resampled", kGenerate},
      {"sampler.seed", 1u, "sampling seed", kGenerate},
      {"sampler.traces_per_sequence", 10u, "traces joined into one training sequence", kTrain},
      {"train.d", 32u, "embedding dimension", kTrain},
      {"train.radius", 1u, "context radius", kTrain},
      {"train.epochs", 5u, "training epochs", kTrain},
      {"train.lr", 0.025, "initial learning rate", kTrain},
      {"train.lr_min", 0.0001, "final learning rate", kTrain},
      {"train.seed", 1u, "seed of the first ensemble member", kTrain},
      {"segment.b1", 1.2, "peak factor against the previous score", kSegment},
      {"segment.b2", 1.2, "peak factor against the next score", kSegment},
      {"segment.b3", 1.5, "peak factor against the neighbourhood mean", kSegment},
      {"segment.k", 5u, "neighbourhood size", kSegment},
      {"segment.neighborhood", "k", "neighbourhood terms: k or k+1", kSegment},
      {"segment.aggregation", "mean", "ensemble aggregation: mean or median", kSegment},
      {"segment.ensemble", 1u, "ensemble size", kTrain | kSegment},
      {"segment.strict_vocabulary", false, "fail on activities unknown to the model", kSegment},
      {"eval.tolerance", 0u, "boundary matching tolerance (events)", kEval},
      {"dfg.min_arc_frequency", 0u, "drop arcs observed fewer times", kDfg},
      {"synth.users", 10u, "synthetic users", kSynth},
      {"synth.min_cases", 1u, "minimum cases per user", kSynth},
      {"synth.max_cases", 5u, "maximum cases per user", kSynth},
      {"synth.min_length", 1u, "minimum case length", kSynth},
      {"synth.max_length", 50u, "maximum case length", kSynth},
      {"synth.stop_probability", 1.0, "probability of stopping at an end activity", kSynth},
      {"synth.seed", 1u, "synthesis seed", kSynth},
      {"synth.starts", "", "comma-separated start activities", kSynth},
      {"synth.ends", "", "comma-separated end activities", kSynth},
  };
  return table;
}

// Exit 1: usage or configuration; exit 2: data.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw Failure{1, message}; }

void check(csg_status status) {
  if (status == CSG_OK) return;
  const int code = status == CSG_ERROR_CONFIG || status == CSG_ERROR_INVALID_ARGUMENT ? 1 : 2;
  throw Failure{code, csg_last_error()};
}

json::json_pointer pointer(const std::string& key) {
  std::string path = "/" + key;
  for (auto& c : path) {
    if (c == '.') c = '/';
  }
  return json::json_pointer(path);
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

// Checks a config file value against the type of the default.
void check_type(const Field& f, const json& v) {
  const auto& d = f.value;
  const bool ok = (d.is_number_unsigned() && v.is_number_unsigned()) ||
                  (d.is_number_float() && v.is_number()) || (d.is_boolean() && v.is_boolean()) ||
                  (d.is_string() && v.is_string());
  if (!ok) config_error(std::string("config field ") + f.key + " has the wrong type (expected " + d.type_name() + ")");
}

void merge_file(json& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  json file;
  try {
    file = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("config file '" + path + "': " + e.what());
  }
  if (!file.is_object()) config_error("config file '" + path + "' must hold a JSON object");
  const json flat = file.flatten();
  for (const auto& [ptr, value] : flat.items()) {
    std::string key = ptr.substr(1);
    for (auto& c : key) {
      if (c == '/') c = '.';
    }
    const Field* f = find_field(key);
    if (!f) config_error("unknown config field '" + key + "'");
    check_type(*f, value);
    config[pointer(key)] = value;
  }
}

json parse_flag(const Field& f, const std::string& text) {
  const auto& d = f.value;
  const std::string name = std::string("--") + f.key;
  try {
    std::size_t used = 0;
    if (d.is_number_unsigned()) {
      if (text.empty() || text[0] == '-') throw std::invalid_argument("negative");
      const auto v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    }
    if (d.is_number_float()) {
      const auto v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    }
  } catch (const std::exception&) {
    config_error(name + ": '" + text + "' is not a valid " + (d.is_number_unsigned() ? "non-negative integer" : "number"));
  }
  if (d.is_boolean()) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    config_error(name + ": expected true or false");
  }
  return text;
}

class Config {
 public:
  explicit Config(json doc) : doc_(std::move(doc)) {}

  std::uint64_t u(const std::string& key) const { return doc_.at(pointer(key)).get<std::uint64_t>(); }
  std::size_t z(const std::string& key) const { return static_cast<std::size_t>(u(key)); }
  double d(const std::string& key) const { return doc_.at(pointer(key)).get<double>(); }
  bool b(const std::string& key) const { return doc_.at(pointer(key)).get<bool>(); }
  std::string s(const std::string& key) const { return doc_.at(pointer(key)).get<std::string>(); }

  std::string required(const std::string& key) const {
    auto v = s(key);
    if (v.empty()) config_error(key + " is required (set it in --config or with --" + key + ")");
    return v;
  }

  unsigned threads() const {
    const auto t = u("threads");
    if (t == 0 || t > 1024) config_error("threads must be in [1, 1024]");
    return static_cast<unsigned>(t);
  }

 private:
  json doc_;
};

// ---- handle ownership -------------------------------------------------

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using EventLogPtr = std::unique_ptr<csg_event_log, Deleter<csg_event_log, csg_event_log_free>>;
using GraphPtr = std::unique_ptr<csg_link_graph, Deleter<csg_link_graph, csg_link_graph_free>>;
using TsPtr = std::unique_ptr<csg_transition_system, Deleter<csg_transition_system, csg_ts_free>>;
using TrainingLogPtr = std::unique_ptr<csg_training_log, Deleter<csg_training_log, csg_training_log_free>>;
using ModelPtr = std::unique_ptr<csg_model, Deleter<csg_model, csg_model_free>>;
using SegmentedPtr = std::unique_ptr<csg_segmented_log, Deleter<csg_segmented_log, csg_segmented_log_free>>;
using DfgPtr = std::unique_ptr<csg_dfg, Deleter<csg_dfg, csg_dfg_free>>;

std::string take(char* text) {
  std::string out = text ? text : "";
  csg_string_free(text);
  return out;
}

// ---- warnings summary --------------------------------------------------

struct Warnings {
  csg_diagnostics counts{};
  std::string unknown;

  void add(const csg_diagnostics& d) {
    counts.dropped_prelogin += d.dropped_prelogin;
    counts.empty_streams += d.empty_streams;
    counts.forced_endings += d.forced_endings;
    counts.max_length_stops += d.max_length_stops;
    counts.discarded_short_traces += d.discarded_short_traces;
    counts.unknown_activities += d.unknown_activities;
    counts.unscorable_gaps += d.unscorable_gaps;
  }

  void print() const {
    const std::pair<const char*, std::size_t> rows[] = {
        {"rows without user id dropped", counts.dropped_prelogin},
        {"empty user streams", counts.empty_streams},
        {"forced trace endings", counts.forced_endings},
        {"traces cut at max length", counts.max_length_stops},
        {"short traces resampled", counts.discarded_short_traces},
        {"unknown activity events", counts.unknown_activities},
        {"unscorable gaps", counts.unscorable_gaps},
    };
    std::size_t shown = 0;
    for (const auto& [label, n] : rows) {
      if (n == 0) continue;
      if (shown++ == 0) std::cerr << "warnings:\n";
      std::cerr << "  " << label << ": " << n << '\n';
    }
    if (!unknown.empty()) {
      if (shown++ == 0) std::cerr << "warnings:\n";
      std::cerr << "  unknown activities: " << unknown << '\n';
    }
    if (shown == 0) std::cerr << "warnings: none\n";
  }
};

csg_schema schema_of(const Config& c, std::vector<std::string>& storage) {
  storage = {c.s("schema.timestamp"), c.s("schema.activity"), c.s("schema.user")};
  csg_schema schema;
  csg_schema_init(&schema);
  schema.timestamp_column = storage[0].c_str();
  schema.activity_column = storage[1].c_str();
  schema.user_column = storage[2].c_str();
  const auto delim = c.s("schema.delimiter");
  if (delim == "tab" || delim == "\\t") {
    schema.delimiter = '\t';
  } else if (delim.size() == 1) {
    schema.delimiter = delim[0];
  } else {
    config_error("schema.delimiter must be a single character or \"tab\"");
  }
  return schema;
}

csg_end_mode end_mode_of(const std::string& name) {
  if (name == "local") return CSG_END_LOCAL;
  if (name == "global") return CSG_END_GLOBAL;
  config_error("ts.end_mode must be local or global, got '" + name + "'");
}

std::vector<std::string> model_paths(const std::string& path, std::size_t members) {
  if (members == 1) return {path};
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash + 1);
  const std::string stem = has_ext ? path.substr(0, dot) : path;
  const std::string ext = has_ext ? path.substr(dot) : "";
  std::vector<std::string> out;
  for (std::size_t j = 0; j < members; ++j) out.push_back(stem + "." + std::to_string(j) + ext);
  return out;
}

std::size_t ensemble_size(const Config& c) {
  const auto k = c.z("segment.ensemble");
  if (k == 0) config_error("segment.ensemble must be >= 1");
  return k;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{2, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw Failure{2, "failed writing '" + path + "'"};
}

void print_ts(const char* what, const csg_transition_system* ts) {
  csg_ts_stats stats;
  csg_ts_stats_get(ts, &stats);
  std::cerr << what << ": " << stats.states << " states, " << stats.transitions << " transitions\n";
}

// ---- subcommands -------------------------------------------------------

void cmd_generate(const Config& c) {
  Warnings warnings;
  std::vector<std::string> names;
  const auto schema = schema_of(c, names);
  const auto log_path = c.required("paths.log");
  const auto graph_path = c.required("paths.link_graph");
  const auto out_path = c.required("paths.training_log");

  csg_event_log* raw_log = nullptr;
  check(csg_event_log_read(log_path.c_str(), &schema, &raw_log));
  const EventLogPtr log(raw_log);
  csg_diagnostics d;
  csg_event_log_diagnostics(log.get(), &d);
  warnings.add(d);
  std::cerr << "event log: " << csg_event_log_size(log.get()) << " events, " << csg_event_log_user_count(log.get())
            << " users\n";

  csg_link_graph* raw_graph = nullptr;
  check(csg_link_graph_read(graph_path.c_str(), &raw_graph));
  const GraphPtr graph(raw_graph);
  std::cerr << "link graph: " << csg_link_graph_vertex_count(graph.get()) << " vertices, "
            << csg_link_graph_edge_count(graph.get()) << " edges\n";

  csg_transition_system* raw_ts = nullptr;
  check(csg_ts_build(log.get(), c.z("ts.window"), &raw_ts));
  const TsPtr ts(raw_ts);
  csg_ts_diagnostics(ts.get(), &d);
  warnings.add(d);
  print_ts("transition system", ts.get());

  csg_prune_report report;
  if (c.u("ts.epsilon") > 0) {
    check(csg_ts_filter_rare(ts.get(), c.u("ts.epsilon"), &report));
    std::cerr << "rare filter (epsilon " << c.u("ts.epsilon") << "): removed " << report.rejected_transitions
              << " transitions, " << report.unreachable_states << " unreachable states ("
              << report.unreachable_transitions << " transitions)\n";
  }
  check(csg_ts_prune(ts.get(), graph.get(), &report));
  std::cerr << "link graph pruning: removed " << report.rejected_transitions << " transitions, "
            << report.unreachable_states << " unreachable states (" << report.unreachable_transitions
            << " transitions)\n";
  print_ts("pruned transition system", ts.get());

  if (const auto dot_path = c.s("paths.ts_dot"); !dot_path.empty()) {
    char* dot = nullptr;
    check(csg_ts_to_dot(ts.get(), &dot));
    write_text(dot_path, take(dot));
  }

  csg_sampler_options options;
  csg_sampler_options_init(&options);
  options.traces = c.u("sampler.n");
  options.max_length = c.z("sampler.max_len");
  options.min_length = c.z("sampler.min_len");
  options.end_mode = end_mode_of(c.s("ts.end_mode"));
  options.seed = c.u("sampler.seed");
  options.threads = c.threads();
  csg_training_log* raw_training = nullptr;
  check(csg_training_log_generate(ts.get(), &options, &raw_training));
  const TrainingLogPtr training(raw_training);
  csg_training_log_diagnostics(training.get(), &d);
  warnings.add(d);
  check(csg_training_log_write(training.get(), out_path.c_str()));
  std::cerr << "training log: " << csg_training_log_size(training.get()) << " traces -> " << out_path << '\n';
  warnings.print();
}

void cmd_train(const Config& c) {
  const auto in_path = c.required("paths.training_log");
  const auto model_path = c.required("paths.model");
  const auto members = ensemble_size(c);

  csg_training_log* raw = nullptr;
  check(csg_training_log_read(in_path.c_str(), &raw));
  const TrainingLogPtr log(raw);
  std::cerr << "training log: " << csg_training_log_size(log.get()) << " traces\n";

  csg_train_options options;
  csg_train_options_init(&options);
  options.dim = c.z("train.d");
  options.radius = c.z("train.radius");
  options.epochs = c.z("train.epochs");
  options.learning_rate = c.d("train.lr");
  options.min_learning_rate = c.d("train.lr_min");
  options.seed = c.u("train.seed");
  options.traces_per_sequence = c.z("sampler.traces_per_sequence");

  std::vector<csg_model*> raw_models(members, nullptr);
  const auto status = csg_model_train_ensemble(log.get(), &options, members, c.threads(), raw_models.data());
  std::vector<ModelPtr> models;
  for (auto* m : raw_models) models.emplace_back(m);
  check(status);

  const auto paths = model_paths(model_path, members);
  for (std::size_t j = 0; j < members; ++j) {
    const auto* m = models[j].get();
    std::vector<double> losses(options.epochs);
    const auto n = csg_model_epoch_losses(m, losses.data(), losses.size());
    for (std::size_t e = 0; e < n && e < losses.size(); ++e) {
      char line[160];
      std::snprintf(line, sizeof line, "model %zu/%zu (seed %llu) epoch %zu/%zu loss %.6f\n", j + 1, members,
                    static_cast<unsigned long long>(csg_model_seed(m)), e + 1, n, losses[e]);
      std::cerr << line;
    }
    check(csg_model_save(m, paths[j].c_str()));
    std::cerr << "model " << j + 1 << ": vocabulary " << csg_model_vocab_size(m) << " -> " << paths[j] << '\n';
  }
  Warnings{}.print();
}

csg_segment_options segment_options(const Config& c) {
  csg_segment_options options;
  csg_segment_options_init(&options);
  options.b1 = c.d("segment.b1");
  options.b2 = c.d("segment.b2");
  options.b3 = c.d("segment.b3");
  options.k = c.z("segment.k");
  const auto hood = c.s("segment.neighborhood");
  if (hood == "k") {
    options.neighborhood = CSG_NEIGHBORHOOD_K;
  } else if (hood == "k+1") {
    options.neighborhood = CSG_NEIGHBORHOOD_K_PLUS_1;
  } else {
    config_error("segment.neighborhood must be k or k+1, got '" + hood + "'");
  }
  const auto agg = c.s("segment.aggregation");
  if (agg == "mean") {
    options.aggregation = CSG_AGGREGATE_MEAN;
  } else if (agg == "median") {
    options.aggregation = CSG_AGGREGATE_MEDIAN;
  } else {
    config_error("segment.aggregation must be mean or median, got '" + agg + "'");
  }
  options.threads = c.threads();
  options.strict_vocabulary = c.b("segment.strict_vocabulary") ? 1 : 0;
  return options;
}

void cmd_segment(const Config& c) {
  Warnings warnings;
  std::vector<std::string> names;
  const auto schema = schema_of(c, names);
  const auto log_path = c.required("paths.log");
  const auto model_path = c.required("paths.model");
  const auto out_path = c.required("paths.output");
  const auto options = segment_options(c);
  const auto members = ensemble_size(c);

  csg_event_log* raw_log = nullptr;
  check(csg_event_log_read(log_path.c_str(), &schema, &raw_log));
  const EventLogPtr log(raw_log);
  csg_diagnostics d;
  csg_event_log_diagnostics(log.get(), &d);
  warnings.add(d);
  std::cerr << "event log: " << csg_event_log_size(log.get()) << " events, " << csg_event_log_user_count(log.get())
            << " users\n";

  std::vector<ModelPtr> models;
  std::vector<const csg_model*> handles;
  for (const auto& path : model_paths(model_path, members)) {
    csg_model* raw = nullptr;
    check(csg_model_load(path.c_str(), &raw));
    models.emplace_back(raw);
    handles.push_back(raw);
  }

  csg_segmented_log* raw_seg = nullptr;
  check(csg_segment(log.get(), handles.data(), handles.size(), &options, &raw_seg));
  const SegmentedPtr seg(raw_seg);
  check(csg_segmented_log_write(seg.get(), out_path.c_str()));

  csg_case_stats stats;
  csg_segmented_log_stats(seg.get(), &stats);
  char line[256];
  std::snprintf(line, sizeof line,
                "cases: %zu, mean length %.3f, median length %.1f, mean duration %.1f s, median duration %.1f s\n",
                stats.cases, stats.mean_length, stats.median_length, stats.mean_duration_seconds,
                stats.median_duration_seconds);
  std::cerr << line << "segmented log: " << csg_segmented_log_event_count(seg.get()) << " events -> " << out_path
            << '\n';
  csg_segmented_log_diagnostics(seg.get(), &d);
  warnings.add(d);
  char* unknown = nullptr;
  check(csg_segmented_log_unknown_activities(seg.get(), &unknown));
  warnings.unknown = take(unknown);
  warnings.print();
}

SegmentedPtr read_segmented(const std::string& path, const csg_schema& schema) {
  csg_segmented_log* raw = nullptr;
  check(csg_segmented_log_read(path.c_str(), &schema, &raw));
  return SegmentedPtr(raw);
}

std::string first_set(const Config& c, const std::string& key, const std::string& fallback) {
  auto v = c.s(key);
  if (v.empty()) v = c.s(fallback);
  if (v.empty()) config_error(key + " (or " + fallback + ") is required");
  return v;
}

void cmd_eval(const Config& c) {
  std::vector<std::string> names;
  const auto schema = schema_of(c, names);
  const auto predicted = read_segmented(first_set(c, "paths.predicted", "paths.output"), schema);
  const auto truth = read_segmented(c.required("paths.truth"), schema);
  csg_metrics metrics;
  check(csg_boundary_metrics(predicted.get(), truth.get(), c.z("eval.tolerance"), &metrics));
  char* text = nullptr;
  check(csg_metrics_to_json(&metrics, &text));
  write_text(c.s("paths.metrics"), take(text) + "\n");
  char line[200];
  std::snprintf(line, sizeof line, "precision %.4f, recall %.4f, f1 %.4f (%zu true, %zu predicted, tolerance %zu)\n",
                metrics.precision, metrics.recall, metrics.f1, metrics.n_true, metrics.n_predicted,
                metrics.tolerance);
  std::cerr << line;
}

void cmd_dfg(const Config& c) {
  std::vector<std::string> names;
  const auto schema = schema_of(c, names);
  const auto log = read_segmented(c.required("paths.output"), schema);
  csg_dfg* raw = nullptr;
  check(csg_dfg_discover(log.get(), c.z("dfg.min_arc_frequency"), &raw));
  const DfgPtr dfg(raw);
  char* dot = nullptr;
  check(csg_dfg_to_dot(dfg.get(), &dot));
  write_text(c.s("paths.dot"), take(dot));
  std::cerr << "dfg: " << csg_dfg_node_count(dfg.get()) << " nodes, " << csg_dfg_arc_count(dfg.get()) << " arcs\n";
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void cmd_synth(const Config& c) {
  const auto graph_path = c.required("paths.link_graph");
  const auto log_path = c.required("paths.log");
  const auto truth_path = c.required("paths.truth");
  const auto starts = split_list(c.s("synth.starts"));
  const auto ends = split_list(c.s("synth.ends"));
  if (starts.empty() || ends.empty()) config_error("synth.starts and synth.ends are required");

  csg_link_graph* raw_graph = nullptr;
  check(csg_link_graph_read(graph_path.c_str(), &raw_graph));
  const GraphPtr graph(raw_graph);

  csg_synth_options options;
  csg_synth_options_init(&options);
  options.users = c.z("synth.users");
  options.min_cases = c.z("synth.min_cases");
  options.max_cases = c.z("synth.max_cases");
  options.min_length = c.z("synth.min_length");
  options.max_length = c.z("synth.max_length");
  options.stop_probability = c.d("synth.stop_probability");
  options.seed = c.u("synth.seed");

  std::vector<const char*> s;
  std::vector<const char*> e;
  for (const auto& x : starts) s.push_back(x.c_str());
  for (const auto& x : ends) e.push_back(x.c_str());
  csg_segmented_log* raw = nullptr;
  check(csg_synthesize(graph.get(), s.data(), s.size(), e.data(), e.size(), &options, &raw));
  const SegmentedPtr truth(raw);
  check(csg_segmented_log_write(truth.get(), truth_path.c_str()));
  csg_event_log* raw_events = nullptr;
  check(csg_segmented_log_events(truth.get(), &raw_events));
  const EventLogPtr events(raw_events);
  check(csg_event_log_write(events.get(), log_path.c_str()));

  csg_case_stats stats;
  csg_segmented_log_stats(truth.get(), &stats);
  std::cerr << "synthesized " << stats.cases << " cases, " << csg_segmented_log_event_count(truth.get())
            << " events -> " << log_path << ", " << truth_path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segments unlabeled click data into process cases.", "clickseg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", csg_version());

  struct Sub {
    const char* name;
    const char* help;
    unsigned bit;
    void (*run)(const Config&);
    CLI::App* app = nullptr;
  };
  std::vector<Sub> subs = {
      {"generate", "build and prune the transition system, sample a training log", kGenerate, cmd_generate},
      {"train", "train the CBOW ensemble on a training log", kTrain, cmd_train},
      {"segment", "split user streams into cases", kSegment, cmd_segment},
      {"eval", "boundary precision/recall/F1 against a ground truth", kEval, cmd_eval},
      {"dfg", "directly-follows graph of a segmented log as DOT", kDfg, cmd_dfg},
      {"synth", "synthesize a ground-truth log from link-graph walks", kSynth, cmd_synth},
  };

  std::string config_path;
  std::map<std::string, std::string> overrides;
  for (auto& sub : subs) {
    sub.app = app.add_subcommand(sub.name, sub.help);
    sub.app->add_option("--config", config_path, "JSON configuration file");
    for (const auto& f : fields()) {
      if (!(f.commands & sub.bit)) continue;
      const std::string key = f.key;
      std::string help = f.help;
      help += " (default " + (f.value.is_string() ? "\"" + f.value.get<std::string>() + "\"" : f.value.dump()) + ")";
      sub.app->add_option_function<std::string>(
          "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    json doc = json::object();
    for (const auto& f : fields()) doc[pointer(f.key)] = f.value;
    if (!config_path.empty()) merge_file(doc, config_path);
    for (const auto& [key, text] : overrides) doc[pointer(key)] = parse_flag(*find_field(key), text);
    const Config config(std::move(doc));
    for (const auto& sub : subs) {
      if (sub.app->parsed()) sub.run(config);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
