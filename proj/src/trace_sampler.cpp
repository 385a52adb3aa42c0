#include "trace_sampler.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace clickseg {

std::uint64_t Rng::below(std::uint64_t n) {
  // rejection keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TraceSampler::TraceSampler(const WeightedTransitionSystem& ts, EndMode mode) : mode_(mode) {
  if (ts.outgoing_weight(WeightedTransitionSystem::initial) == 0) {
    throw Error(ErrorKind::degenerate, "degenerate model: no transition leaves the initial state");
  }

  std::map<std::string, std::size_t> label_index;
  auto intern = [&](const std::string& label) {
    const auto [it, inserted] = label_index.emplace(label, labels_.size());
    if (inserted) labels_.push_back(label);
    return it->second;
  };

  const auto end_total = static_cast<double>(ts.incoming_weight(WeightedTransitionSystem::final_sink));
  states_.resize(ts.state_count());
  for (StateId s = 0; s < ts.state_count(); ++s) {
    auto& table = states_[s];
    double cumulative = 0.0;
    for (auto t : ts.outgoing(s)) {
      const auto& tr = ts.transitions()[t];
      if (tr.silent()) continue;
      cumulative += static_cast<double>(tr.weight);
      table.choices.push_back(Choice{intern(*tr.label), tr.to, cumulative});
    }
    const auto silent = static_cast<double>(ts.weight(s, std::nullopt, WeightedTransitionSystem::final_sink));
    if (mode_ == EndMode::local) {
      if (silent > 0) {
        cumulative += silent;
        table.choices.push_back(Choice{kSilent, WeightedTransitionSystem::final_sink, cumulative});
      }
    } else if (silent > 0) {
      table.stop = silent / end_total;
    }
    table.total = cumulative;
  }
}

namespace {

template <class Choices>
const auto& pick(const Choices& choices, double total, double u) {
  const double target = u * total;
  for (const auto& c : choices) {
    if (target < c.cumulative) return c;
  }
  return choices.back();
}

}  // namespace

Trace TraceSampler::sample(const std::function<double()>& uniform, std::size_t max_length, Diagnostics* diag) const {
  if (max_length == 0) throw Error(ErrorKind::invalid_argument, "max trace length must be >= 1");

  const auto& start = states_[WeightedTransitionSystem::initial];
  const auto& first = pick(start.choices, start.total, uniform());
  Trace trace{labels_[first.label]};
  StateId s = first.to;

  while (true) {
    if (trace.size() >= max_length) {
      if (diag) ++diag->max_length_stops;
      break;
    }
    const auto& table = states_[s];
    if (mode_ == EndMode::global && table.stop > 0.0 && uniform() < table.stop) break;
    if (table.choices.empty()) {
      if (diag && table.stop == 0.0) ++diag->forced_endings;
      break;
    }
    const auto& next = pick(table.choices, table.total, uniform());
    if (next.label == kSilent) break;
    trace.push_back(labels_[next.label]);
    s = next.to;
  }
  return trace;
}

Trace TraceSampler::sample(Rng& rng, std::size_t max_length, Diagnostics* diag) const {
  return sample([&rng] { return rng.uniform(); }, max_length, diag);
}

Trace sample_trace(const WeightedTransitionSystem& ts, Rng& rng, std::size_t max_length, Diagnostics* diag) {
  return TraceSampler(ts).sample(rng, max_length, diag);
}

TrainingLog generate_training_log(const WeightedTransitionSystem& ts, std::size_t n, std::uint64_t seed,
                                  const SamplerOptions& options, unsigned threads, Diagnostics* diag) {
  TrainingLog log;
  if (n == 0) return log;
  if (options.min_length > options.max_length) {
    throw Error(ErrorKind::config, "sampler min_length exceeds max_length");
  }
  const TraceSampler sampler(ts, options.end_mode);

  constexpr std::size_t kChunk = 512;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<Trace>> results(chunks);
  std::vector<Diagnostics> chunk_diag(chunks);
  std::vector<std::exception_ptr> errors(chunks);

  auto run_chunk = [&](std::size_t c) {
    try {
      Rng rng(derive_seed(seed, c));
      const std::size_t count = std::min(kChunk, n - c * kChunk);
      auto& out = results[c];
      out.reserve(count);
      while (out.size() < count) {
        std::size_t attempts = 0;
        while (true) {
          auto trace = sampler.sample(rng, options.max_length, &chunk_diag[c]);
          if (trace.size() >= options.min_length) {
            out.push_back(std::move(trace));
            break;
          }
          ++chunk_diag[c].discarded_short_traces;
          if (++attempts >= options.max_attempts) {
            throw Error(ErrorKind::degenerate, "degenerate model: no trace of length >= " +
                                                   std::to_string(options.min_length) + " after " +
                                                   std::to_string(attempts) + " attempts");
          }
        }
      }
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  log.traces.reserve(n);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (auto& t : results[c]) log.traces.push_back(std::move(t));
    if (diag) diag->merge(chunk_diag[c]);
  }
  return log;
}

std::vector<TrainingSequence> build_training_sequences(const TrainingLog& log, Rng& rng,
                                                       std::size_t traces_per_sequence) {
  if (traces_per_sequence == 0) throw Error(ErrorKind::invalid_argument, "traces_per_sequence must be >= 1");

  std::vector<std::size_t> order(log.traces.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  for (std::size_t k = order.size(); k > 1; --k) {
    std::swap(order[k - 1], order[rng.below(k)]);
  }

  std::vector<TrainingSequence> sequences;
  sequences.reserve((order.size() + traces_per_sequence - 1) / traces_per_sequence);
  for (std::size_t begin = 0; begin < order.size(); begin += traces_per_sequence) {
    auto& seq = sequences.emplace_back();
    const std::size_t end = std::min(order.size(), begin + traces_per_sequence);
    for (std::size_t k = begin; k < end; ++k) {
      if (k > begin) seq.push_back(kBoundaryToken);
      const auto& trace = log.traces[order[k]];
      seq.insert(seq.end(), trace.begin(), trace.end());
    }
  }
  return sequences;
}

void write_training_log(std::ostream& out, const TrainingLog& log) {
  for (const auto& trace : log.traces) {
    for (std::size_t k = 0; k < trace.size(); ++k) {
      if (trace[k].find_first_of(" \t\r\n") != std::string::npos) {
        throw Error(ErrorKind::invalid_argument, "activity '" + trace[k] + "' contains whitespace");
      }
      if (k > 0) out << ' ';
      out << trace[k];
    }
    out << '\n';
  }
}

TrainingLog read_training_log(std::istream& in) {
  TrainingLog log;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    Trace trace;
    for (std::string label; fields >> label;) trace.push_back(std::move(label));
    if (!trace.empty()) log.traces.push_back(std::move(trace));
  }
  return log;
}

}  // namespace clickseg
