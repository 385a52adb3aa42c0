#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "transition_system.hpp"

namespace clickseg {

// Placeholder activity joining consecutive traces in a training sequence.
inline const std::string kBoundaryToken = "\xE2\x96\xA0";

using Trace = std::vector<std::string>;
using TrainingSequence = std::vector<std::string>;

struct TrainingLog {
  std::vector<Trace> traces;

  friend bool operator==(const TrainingLog&, const TrainingLog&) = default;
};

// Seedable 64-bit generator. uniform() and below() are computed from raw
// engine output so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Independent seed for sub-stream `stream` of `seed` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct SamplerOptions {
  std::size_t max_length = 50;
  // Shorter traces are discarded and drawn again.
  std::size_t min_length = 2;
  EndMode end_mode = EndMode::local;
  // Consecutive rejections tolerated before the model is declared degenerate.
  std::size_t max_attempts = 10000;
};

// Ancestral sampler over a pruned transition system. The start state is
// drawn from the weights of the transitions leaving i; afterwards the walk
// stops with probability l_end and otherwise follows a labelled transition
// in proportion to its weight. States without outgoing transitions end the
// walk (counted as forced endings).
class TraceSampler {
 public:
  // Throws Error(degenerate) when i has no outgoing transition.
  explicit TraceSampler(const WeightedTransitionSystem& ts, EndMode mode = EndMode::local);

  // `uniform` yields draws in [0, 1).
  Trace sample(const std::function<double()>& uniform, std::size_t max_length,
               Diagnostics* diag = nullptr) const;
  Trace sample(Rng& rng, std::size_t max_length, Diagnostics* diag = nullptr) const;

 private:
  struct Choice {
    std::size_t label;  // index into labels_, or npos for the silent transition
    StateId to;
    double cumulative;
  };
  struct StateTable {
    std::vector<Choice> choices;  // labelled choices; the silent one last in local mode
    double total = 0.0;           // denominator for the choice draw
    double stop = 0.0;            // global mode: stopping probability
  };

  static constexpr std::size_t kSilent = static_cast<std::size_t>(-1);

  EndMode mode_;
  std::vector<std::string> labels_;
  std::vector<StateTable> states_;
};

Trace sample_trace(const WeightedTransitionSystem& ts, Rng& rng, std::size_t max_length = 50,
                   Diagnostics* diag = nullptr);

// Exactly n traces, identical for identical (ts, n, seed, options) whatever
// the thread count: work is split into fixed chunks with derived seeds.
TrainingLog generate_training_log(const WeightedTransitionSystem& ts, std::size_t n, std::uint64_t seed,
                                  const SamplerOptions& options = {}, unsigned threads = 1,
                                  Diagnostics* diag = nullptr);

// Shuffles the traces, groups them and joins each group with single
// boundary tokens. Every trace is used exactly once.
std::vector<TrainingSequence> build_training_sequences(const TrainingLog& log, Rng& rng,
                                                       std::size_t traces_per_sequence);

// One trace per line, labels separated by single spaces.
void write_training_log(std::ostream& out, const TrainingLog& log);
TrainingLog read_training_log(std::istream& in);

}  // namespace clickseg
