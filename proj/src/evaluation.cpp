#include "evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace clickseg {

BoundaryMap boundaries_of(const SegmentedLog& log) {
  BoundaryMap out;
  std::map<std::string, std::size_t> consumed;
  for (const auto& c : log.cases) {
    auto& positions = out[c.user];
    auto& n = consumed[c.user];
    if (n > 0) positions.push_back(n);
    n += c.events.size();
  }
  return out;
}

LinkGraphWalker::LinkGraphWalker(LinkGraph graph, Options options)
    : graph_(std::move(graph)), options_(std::move(options)) {
  if (options_.starts.empty() || options_.ends.empty()) {
    throw Error(ErrorKind::invalid_argument, "walker needs at least one start and one end activity");
  }
  if (options_.min_length == 0 || options_.min_length > options_.max_length) {
    throw Error(ErrorKind::invalid_argument, "walker length range must satisfy 1 <= min <= max");
  }
  for (const auto& s : options_.starts) {
    if (!graph_.vertices.contains(s)) {
      throw Error(ErrorKind::invalid_argument, "start activity '" + s + "' is not in the link graph");
    }
  }
  for (const auto& [from, to] : graph_.edges) {
    const auto w = options_.weights.find({from, to});
    const double weight = w == options_.weights.end() ? 1.0 : w->second;
    if (!(weight >= 0.0)) throw Error(ErrorKind::invalid_argument, "negative edge weight");
    if (weight == 0.0) continue;
    auto& list = successors_[from];
    list.push_back(Successor{to, (list.empty() ? 0.0 : list.back().cumulative) + weight});
  }
}

Trace LinkGraphWalker::operator()(Rng& rng) const {
  const std::set<std::string> ends(options_.ends.begin(), options_.ends.end());
  for (std::size_t attempt = 0; attempt < options_.max_attempts; ++attempt) {
    Trace trace{options_.starts[rng.below(options_.starts.size())]};
    while (true) {
      const auto& current = trace.back();
      if (ends.contains(current) && trace.size() >= options_.min_length &&
          (options_.stop_probability >= 1.0 || rng.uniform() < options_.stop_probability)) {
        return trace;
      }
      if (trace.size() >= options_.max_length) break;
      const auto it = successors_.find(current);
      if (it == successors_.end()) break;
      const auto& list = it->second;
      const double target = rng.uniform() * list.back().cumulative;
      const auto next = std::find_if(list.begin(), list.end(), [&](const Successor& s) { return target < s.cumulative; });
      trace.push_back(next == list.end() ? list.back().label : next->label);
    }
  }
  throw Error(ErrorKind::degenerate,
              "degenerate generator: no acceptable walk after " + std::to_string(options_.max_attempts) + " attempts");
}

TraceGenerator trace_generator(const WeightedTransitionSystem& ts, const SamplerOptions& options) {
  auto sampler = std::make_shared<TraceSampler>(ts, options.end_mode);
  return [sampler, options](Rng& rng) {
    for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
      auto trace = sampler->sample(rng, options.max_length);
      if (trace.size() >= options.min_length) return trace;
    }
    throw Error(ErrorKind::degenerate, "degenerate generator: traces are always too short");
  };
}

GroundTruthLog synthesize_ground_truth(const TraceGenerator& generator, const SynthesisOptions& options) {
  if (options.min_cases == 0 || options.min_cases > options.max_cases) {
    throw Error(ErrorKind::invalid_argument, "case count range must satisfy 1 <= min <= max");
  }
  using std::chrono::seconds;
  const Timestamp base = *parse_timestamp("2021-01-25 00:00:00.000");

  GroundTruthLog out;
  out.cases.columns = {"timestamp", "screen", "user"};
  out.cases.schema = ColumnSchema{};

  for (std::size_t u = 0; u < options.users; ++u) {
    char name[32];
    std::snprintf(name, sizeof name, "user%05zu", u + 1);
    Rng rng(derive_seed(options.seed, u));
    const std::size_t count = options.min_cases + rng.below(options.max_cases - options.min_cases + 1);
    Timestamp t = base;
    for (std::size_t c = 0; c < count; ++c) {
      const auto trace = generator(rng);
      if (trace.empty()) throw Error(ErrorKind::degenerate, "generator produced an empty trace");
      Case kase{make_case_id(name, c + 1), name, {}};
      for (std::size_t k = 0; k < trace.size(); ++k) {
        if (k > 0) t += seconds{options.event_spacing_seconds};
        kase.events.push_back(Event{t, trace[k], name, {}});
      }
      t += seconds{options.case_spacing_seconds};
      out.cases.cases.push_back(std::move(kase));
    }
  }
  out.unsegmented = to_event_log(out.cases);
  out.true_boundaries = boundaries_of(out.cases);
  return out;
}

BoundaryMetrics boundary_metrics(const BoundaryMap& predicted, const BoundaryMap& truth, std::size_t tolerance) {
  BoundaryMetrics m;
  m.tolerance = tolerance;
  std::set<std::string> users;
  for (const auto& [u, _] : predicted) users.insert(u);
  for (const auto& [u, _] : truth) users.insert(u);

  static const std::vector<std::size_t> none;
  for (const auto& u : users) {
    const auto pit = predicted.find(u);
    const auto tit = truth.find(u);
    auto pred = pit == predicted.end() ? none : pit->second;
    auto real = tit == truth.end() ? none : tit->second;
    std::sort(pred.begin(), pred.end());
    std::sort(real.begin(), real.end());
    m.n_predicted += pred.size();
    m.n_true += real.size();

    std::size_t j = 0;
    for (auto p : pred) {
      while (j < real.size() && real[j] + tolerance < p) ++j;
      if (j < real.size() && real[j] <= p + tolerance) {
        ++m.matched;
        ++j;
      }
    }
  }

  if (m.n_predicted == 0 && m.n_true == 0) {
    m.precision = m.recall = m.f1 = 1.0;
    return m;
  }
  m.precision = m.n_predicted == 0 ? 0.0 : static_cast<double>(m.matched) / static_cast<double>(m.n_predicted);
  m.recall = m.n_true == 0 ? 0.0 : static_cast<double>(m.matched) / static_cast<double>(m.n_true);
  m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

BoundaryMetrics boundary_metrics(const SegmentedLog& predicted, const SegmentedLog& truth, std::size_t tolerance) {
  auto lengths = [](const SegmentedLog& log) {
    std::map<std::string, std::size_t> n;
    for (const auto& c : log.cases) n[c.user] += c.events.size();
    return n;
  };
  const auto lp = lengths(predicted);
  const auto lt = lengths(truth);
  for (const auto& [user, n] : lt) {
    const auto it = lp.find(user);
    const std::size_t other = it == lp.end() ? 0 : it->second;
    if (other != n) {
      throw Error(ErrorKind::schema, "user '" + user + "' has " + std::to_string(other) + " predicted events but " +
                                         std::to_string(n) + " ground-truth events");
    }
  }
  for (const auto& [user, n] : lp) {
    if (!lt.contains(user)) throw Error(ErrorKind::schema, "user '" + user + "' is missing from the ground truth");
  }
  return boundary_metrics(boundaries_of(predicted), boundaries_of(truth), tolerance);
}

std::string metrics_json(const BoundaryMetrics& m) {
  nlohmann::ordered_json doc;
  doc["precision"] = m.precision;
  doc["recall"] = m.recall;
  doc["f1"] = m.f1;
  doc["n_true"] = m.n_true;
  doc["n_predicted"] = m.n_predicted;
  doc["tolerance"] = m.tolerance;
  return doc.dump();
}

Dfg discover_dfg(const SegmentedLog& log, std::size_t min_arc_frequency) {
  Dfg dfg;
  std::map<std::string, std::size_t> frequency;
  for (const auto& c : log.cases) {
    for (std::size_t k = 0; k < c.events.size(); ++k) {
      ++frequency[c.events[k].activity];
      if (k > 0) ++dfg.arcs[{c.events[k - 1].activity, c.events[k].activity}];
    }
  }
  std::erase_if(dfg.arcs, [&](const auto& arc) { return arc.second < min_arc_frequency; });
  for (const auto& [arc, _] : dfg.arcs) {
    dfg.nodes[arc.first] = frequency[arc.first];
    dfg.nodes[arc.second] = frequency[arc.second];
  }
  return dfg;
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const Dfg& dfg) {
  std::ostringstream out;
  out << "digraph {\n";
  for (const auto& [label, n] : dfg.nodes) {
    out << "  " << quote(label) << " [label=" << quote(label + " (" + std::to_string(n) + ")") << "];\n";
  }
  for (const auto& [arc, n] : dfg.arcs) {
    out << "  " << quote(arc.first) << " -> " << quote(arc.second) << " [label=" << quote(std::to_string(n))
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

CaseStatistics case_statistics(const SegmentedLog& log) {
  CaseStatistics s;
  s.cases = log.cases.size();
  if (s.cases == 0) return s;
  std::vector<double> lengths;
  std::vector<double> durations;
  for (const auto& c : log.cases) {
    lengths.push_back(static_cast<double>(c.events.size()));
    const auto d = c.events.back().timestamp - c.events.front().timestamp;
    durations.push_back(static_cast<double>(d.count()) / 1000.0);
  }
  for (double v : lengths) s.mean_length += v;
  for (double v : durations) s.mean_duration_seconds += v;
  s.mean_length /= static_cast<double>(s.cases);
  s.mean_duration_seconds /= static_cast<double>(s.cases);
  s.median_length = median(lengths);
  s.median_duration_seconds = median(durations);
  return s;
}

}  // namespace clickseg
