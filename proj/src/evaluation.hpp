#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "log_ingest.hpp"
#include "segmenter.hpp"
#include "trace_sampler.hpp"
#include "transition_system.hpp"

namespace clickseg {

// user id -> sorted split positions (see detect_boundaries)
using BoundaryMap = std::map<std::string, std::vector<std::size_t>>;

BoundaryMap boundaries_of(const SegmentedLog& log);

using TraceGenerator = std::function<Trace(Rng&)>;

// Random walk over a link graph: starts at one of `starts`, follows edges
// in proportion to their weight (1 when unlisted) and may stop on reaching
// one of `ends`. Walks leaving [min_length, max_length] or hitting a dead
// end are rejected and redrawn.
class LinkGraphWalker {
 public:
  struct Options {
    std::vector<std::string> starts;
    std::vector<std::string> ends;
    std::size_t min_length = 1;
    std::size_t max_length = 50;
    // Probability of stopping at an end activity once min_length is reached.
    double stop_probability = 1.0;
    std::map<std::pair<std::string, std::string>, double> weights;
    std::size_t max_attempts = 10000;
  };

  LinkGraphWalker(LinkGraph graph, Options options);

  // Throws Error(degenerate) after max_attempts rejected walks.
  Trace operator()(Rng& rng) const;

 private:
  struct Successor {
    std::string label;
    double cumulative;
  };

  LinkGraph graph_;
  Options options_;
  std::map<std::string, std::vector<Successor>> successors_;
};

TraceGenerator trace_generator(const WeightedTransitionSystem& ts, const SamplerOptions& options = {});

struct SynthesisOptions {
  std::size_t users = 10;
  std::size_t min_cases = 1;
  std::size_t max_cases = 5;
  std::uint64_t seed = 1;
  std::int64_t event_spacing_seconds = 1;
  std::int64_t case_spacing_seconds = 60;
};

struct GroundTruthLog {
  SegmentedLog cases;  // ground-truth case ids
  EventLog unsegmented;
  BoundaryMap true_boundaries;
};

// For each synthetic user draws a case count in [min_cases, max_cases],
// samples that many traces and concatenates them into one stream.
GroundTruthLog synthesize_ground_truth(const TraceGenerator& generator, const SynthesisOptions& options);

struct BoundaryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_true = 0;
  std::size_t n_predicted = 0;
  std::size_t matched = 0;
  std::size_t tolerance = 0;
};

// Greedy left-to-right matching: each predicted position takes the earliest
// unmatched true position within +-tolerance. With no boundaries on either
// side all scores are 1; an empty side otherwise scores 0.
BoundaryMetrics boundary_metrics(const BoundaryMap& predicted, const BoundaryMap& truth, std::size_t tolerance = 0);
// Both logs must hold the same per-user streams.
BoundaryMetrics boundary_metrics(const SegmentedLog& predicted, const SegmentedLog& truth, std::size_t tolerance = 0);

// {"precision", "recall", "f1", "n_true", "n_predicted", "tolerance"}
std::string metrics_json(const BoundaryMetrics& metrics);

struct Dfg {
  std::map<std::string, std::size_t> nodes;
  std::map<std::pair<std::string, std::string>, std::size_t> arcs;
};

// Directly-follows pairs counted within cases only; arcs below
// min_arc_frequency are dropped, then nodes without arcs.
Dfg discover_dfg(const SegmentedLog& log, std::size_t min_arc_frequency = 0);

// Nodes and edges in lexicographic order.
std::string export_dot(const Dfg& dfg);

struct CaseStatistics {
  std::size_t cases = 0;
  double mean_length = 0.0;
  double median_length = 0.0;
  double mean_duration_seconds = 0.0;
  double median_duration_seconds = 0.0;
};

CaseStatistics case_statistics(const SegmentedLog& log);

}  // namespace clickseg
