#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <sstream>

#include "error.hpp"
#include "fixtures.hpp"
#include "trace_sampler.hpp"

namespace clickseg {
namespace {

WeightedTransitionSystem pruned_running_example() {
  return prune_with_link_graph(build_merged_ts(testing::running_example_streams(), 2),
                               testing::running_example_graph());
}

// Walks `trace` through `ts` by window lookup. Returns the visited states
// (without i) or nothing when some step has no transition. `ended` requires
// the last state to have a silent transition into f.
std::optional<std::vector<StateId>> replay(const WeightedTransitionSystem& ts, const Trace& trace, bool ended) {
  std::vector<StateId> visited;
  StateId s = WeightedTransitionSystem::initial;
  Window window;
  for (const auto& a : trace) {
    window.push_back(a);
    if (window.size() > ts.window()) window.erase(window.begin());
    const auto next = ts.find_state(window);
    if (!next || ts.weight(s, a, *next) == 0) return std::nullopt;
    s = *next;
    visited.push_back(s);
  }
  if (ended && ts.weight(s, std::nullopt, WeightedTransitionSystem::final_sink) == 0) return std::nullopt;
  return visited;
}

TEST(RngTest, BelowStaysInRange) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int k = 0; k < 7000; ++k) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_GT(c, 800);
  for (int k = 0; k < 1000; ++k) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngTest, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(SampleTraceTest, ForcedDrawsFollowMABC) {
  const auto ts = pruned_running_example();
  const TraceSampler sampler(ts);
  // i -> (M); (M): A has weight 2 of 3; (M,A) and (A,B) have one successor;
  // (B,C): M (1) then tau (2), so 0.99 picks tau.
  const std::vector<double> draws{0.5, 0.1, 0.5, 0.5, 0.99};
  std::size_t next = 0;
  const auto trace = sampler.sample([&] { return draws.at(next++); }, 50);
  EXPECT_EQ(trace, (Trace{"M", "A", "B", "C"}));
  EXPECT_EQ(next, draws.size());
  EXPECT_TRUE(replay(ts, trace, true));
}

TEST(SampleTraceTest, SingleChainAlwaysM) {
  const auto ts = build_merged_ts({{"M"}}, 2);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(sample_trace(ts, rng), Trace{"M"});
}

TEST(SampleTraceTest, DegenerateSystemThrows) {
  const auto ts = filter_rare(pruned_running_example(), 100);
  try {
    TraceSampler sampler(ts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
}

TEST(SampleTraceTest, MaxLengthCapsLoops) {
  // A -> A loop never ends on its own in global mode with no silent weight.
  WeightedTransitionSystem ts(1);
  const auto a = ts.add_state({"A"});
  ts.add(WeightedTransitionSystem::initial, "A", a);
  ts.add(a, "A", a);
  Diagnostics diag;
  Rng rng(2);
  const auto trace = TraceSampler(ts).sample(rng, 7, &diag);
  EXPECT_EQ(trace.size(), 7u);
  EXPECT_EQ(diag.max_length_stops, 1u);
}

TEST(SampleTraceTest, DeadEndIsForcedEnding) {
  const auto ts = filter_rare(pruned_running_example(), 2);
  Diagnostics diag;
  Rng rng(2);
  EXPECT_EQ(TraceSampler(ts).sample(rng, 50, &diag), (Trace{"M", "A"}));
  EXPECT_EQ(diag.forced_endings, 1u);
}

TEST(GenerateTest, ZeroTracesIsEmpty) {
  EXPECT_TRUE(generate_training_log(pruned_running_example(), 0, 1).traces.empty());
}

TEST(GenerateTest, DeterministicAcrossRunsAndThreads) {
  const auto ts = pruned_running_example();
  const auto a = generate_training_log(ts, 10000, 42);
  const auto b = generate_training_log(ts, 10000, 42);
  const auto c = generate_training_log(ts, 10000, 42, {}, 3);
  EXPECT_EQ(a.traces.size(), 10000u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a, generate_training_log(ts, 10000, 43));
}

TEST(GenerateTest, AllTracesReplayAndRespectLengths) {
  const auto ts = pruned_running_example();
  SamplerOptions options;
  options.max_length = 12;
  Diagnostics diag;
  const auto log = generate_training_log(ts, 5000, 7, options, 2, &diag);
  for (const auto& t : log.traces) {
    EXPECT_GE(t.size(), options.min_length);
    EXPECT_LE(t.size(), options.max_length);
    EXPECT_TRUE(replay(ts, t, t.size() < options.max_length));
  }
}

TEST(GenerateTest, MinLengthUnreachableIsDegenerate) {
  SamplerOptions options;
  options.max_attempts = 50;
  try {
    generate_training_log(build_merged_ts({{"M"}}, 2), 3, 1, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
  options.min_length = 1;
  EXPECT_EQ(generate_training_log(build_merged_ts({{"M"}}, 2), 3, 1, options).traces, (std::vector<Trace>(3, {"M"})));
}

TEST(GenerateTest, StartFrequenciesMatchWeights) {
  // i -> A (3), B (1), C (6)
  const auto ts = build_merged_ts({{"A", "x"}, {"A", "x"}, {"A", "x"}, {"B", "x"}, {"C", "x"}, {"C", "x"},
                                   {"C", "x"}, {"C", "x"}, {"C", "x"}, {"C", "x"}},
                                  1);
  const auto log = generate_training_log(ts, 100000, 11);
  std::map<std::string, double> freq;
  for (const auto& t : log.traces) freq[t.front()] += 1.0 / 100000.0;
  EXPECT_NEAR(freq["A"], 0.3, 0.01);
  EXPECT_NEAR(freq["B"], 0.1, 0.01);
  EXPECT_NEAR(freq["C"], 0.6, 0.01);
}

// Pooled goodness of fit of every observed branching decision against the
// normalized outgoing weights.
TEST(GenerateTest, ChiSquaredAgainstLTrans) {
  const auto ts = build_merged_ts(testing::running_example_streams(), 2);
  const std::size_t n = 100000;
  SamplerOptions options;
  options.min_length = 1;
  const auto log = generate_training_log(ts, n, 5, options);

  std::map<std::pair<StateId, std::string>, double> observed;
  for (const auto& t : log.traces) {
    const auto path = replay(ts, t, t.size() < options.max_length);
    ASSERT_TRUE(path);
    StateId s = WeightedTransitionSystem::initial;
    for (std::size_t k = 0; k < t.size(); ++k) {
      observed[{s, t[k]}] += 1;
      s = (*path)[k];
    }
    if (t.size() < options.max_length) observed[{s, "<end>"}] += 1;
  }

  double statistic = 0.0;
  std::size_t dof = 0;
  for (StateId s = 0; s < ts.state_count(); ++s) {
    const auto& out = ts.outgoing(s);
    if (out.size() < 2) continue;
    double visits = 0.0;
    for (auto t : out) {
      const auto& tr = ts.transitions()[t];
      visits += observed[{s, tr.label.value_or("<end>")}];
    }
    for (auto t : out) {
      const auto& tr = ts.transitions()[t];
      const double expected = visits * l_trans(ts, s, tr.label, tr.to);
      const double diff = observed[{s, tr.label.value_or("<end>")}] - expected;
      statistic += diff * diff / expected;
    }
    dof += out.size() - 1;
  }
  ASSERT_GT(dof, 0u);
  const boost::math::chi_squared dist(static_cast<double>(dof));
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, statistic)), 0.01) << statistic << " dof " << dof;
}

TEST(TrainingSequenceTest, PairIsJoinedWithBoundary) {
  TrainingLog log{{{"a1", "a2", "a4", "a5"}, {"a6", "a7", "a8"}}};
  const TrainingSequence forward{"a1", "a2", "a4", "a5", kBoundaryToken, "a6", "a7", "a8"};
  const TrainingSequence backward{"a6", "a7", "a8", kBoundaryToken, "a1", "a2", "a4", "a5"};
  bool saw_forward = false;
  bool saw_backward = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto seqs = build_training_sequences(log, rng, 2);
    ASSERT_EQ(seqs.size(), 1u);
    EXPECT_TRUE(seqs[0] == forward || seqs[0] == backward);
    saw_forward |= seqs[0] == forward;
    saw_backward |= seqs[0] == backward;
  }
  EXPECT_TRUE(saw_forward);
  EXPECT_TRUE(saw_backward);
}

TEST(TrainingSequenceTest, GroupSizeOneHasNoBoundary) {
  const auto log = generate_training_log(pruned_running_example(), 200, 3);
  Rng rng(1);
  const auto seqs = build_training_sequences(log, rng, 1);
  EXPECT_EQ(seqs.size(), 200u);
  for (const auto& s : seqs) EXPECT_EQ(std::count(s.begin(), s.end(), kBoundaryToken), 0);
}

TEST(TrainingSequenceTest, TokenCountsAndPlacement) {
  const auto log = generate_training_log(pruned_running_example(), 1003, 9);
  std::size_t activity_tokens = 0;
  for (const auto& t : log.traces) activity_tokens += t.size();
  for (std::size_t group : {1, 2, 7, 10, 5000}) {
    Rng rng(group);
    const auto seqs = build_training_sequences(log, rng, group);
    const std::size_t expected_sequences = (log.traces.size() + group - 1) / group;
    EXPECT_EQ(seqs.size(), expected_sequences);
    std::size_t tokens = 0;
    std::vector<Trace> recovered;
    for (const auto& s : seqs) {
      tokens += s.size();
      ASSERT_FALSE(s.empty());
      EXPECT_NE(s.front(), kBoundaryToken);
      EXPECT_NE(s.back(), kBoundaryToken);
      Trace current;
      for (const auto& tok : s) {
        if (tok == kBoundaryToken) {
          EXPECT_FALSE(current.empty());
          recovered.push_back(std::move(current));
          current.clear();
        } else {
          current.push_back(tok);
        }
      }
      recovered.push_back(std::move(current));
    }
    EXPECT_EQ(tokens, activity_tokens + log.traces.size() - expected_sequences);
    auto original = log.traces;
    std::sort(original.begin(), original.end());
    std::sort(recovered.begin(), recovered.end());
    EXPECT_EQ(recovered, original);
  }
}

TEST(TrainingLogIoTest, RoundTrip) {
  const auto log = generate_training_log(pruned_running_example(), 50, 1);
  std::stringstream buf;
  write_training_log(buf, log);
  EXPECT_EQ(read_training_log(buf), log);
}

TEST(TrainingLogIoTest, RejectsWhitespaceLabels) {
  std::stringstream buf;
  EXPECT_THROW(write_training_log(buf, TrainingLog{{{"log in"}}}), Error);
}

}  // namespace
}  // namespace clickseg
