#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diagnostics.hpp"
#include "log_ingest.hpp"

namespace clickseg {

using StateId = std::size_t;
// Transition label; std::nullopt is the silent label leading to the final sink.
using Label = std::optional<std::string>;
// The most recent activities, oldest first.
using Window = std::vector<std::string>;

struct Transition {
  StateId from;
  Label label;
  StateId to;
  std::uint64_t weight;

  bool silent() const { return !label.has_value(); }
};

// Sequence-abstraction transition system with occurrence counts. State 0 is
// the shared initial state, state 1 the final sink; every other state is a
// window of at most window() activities.
class WeightedTransitionSystem {
 public:
  static constexpr StateId initial = 0;
  static constexpr StateId final_sink = 1;

  explicit WeightedTransitionSystem(std::size_t window);

  std::size_t window() const { return window_; }
  std::size_t state_count() const { return windows_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }

  StateId add_state(const Window& window);
  std::optional<StateId> find_state(const Window& window) const;
  const Window& window_of(StateId s) const { return windows_.at(s); }
  std::string state_name(StateId s) const;

  // Adds `count` occurrences. Enforces the sequence abstraction: a labelled
  // transition must shift the window by its label; silent ones go to the sink.
  void add(StateId from, const Label& label, StateId to, std::uint64_t count = 1);

  // Zero for transitions that are not stored.
  std::uint64_t weight(StateId from, const Label& label, StateId to) const;

  // Stored transitions in insertion order.
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<std::size_t>& outgoing(StateId s) const { return outgoing_.at(s); }
  const std::vector<std::size_t>& incoming(StateId s) const { return incoming_.at(s); }
  std::uint64_t outgoing_weight(StateId s) const { return out_total_.at(s); }
  std::uint64_t incoming_weight(StateId s) const { return in_total_.at(s); }

 private:
  struct Key {
    StateId from;
    Label label;
    StateId to;
    auto operator<=>(const Key&) const = default;
  };

  std::size_t window_;
  std::vector<Window> windows_;
  std::map<Window, StateId> state_index_;
  std::vector<Transition> transitions_;
  std::map<Key, std::size_t> transition_index_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<std::vector<std::size_t>> incoming_;
  std::vector<std::uint64_t> out_total_;
  std::vector<std::uint64_t> in_total_;
};

// One path i -> ... -> f per non-empty sequence, counting every step.
WeightedTransitionSystem build_merged_ts(const std::vector<std::vector<std::string>>& sequences,
                                         std::size_t window, Diagnostics* diag = nullptr);
WeightedTransitionSystem build_merged_ts(std::span<const UserStream> streams, std::size_t window,
                                         Diagnostics* diag = nullptr);

struct PruneReport {
  std::size_t rejected_transitions = 0;     // removed by the filter itself
  std::size_t unreachable_states = 0;       // states no longer reachable from i
  std::size_t unreachable_transitions = 0;  // transitions leaving those states
};

// Drops transitions with weight < epsilon, then everything unreachable.
WeightedTransitionSystem filter_rare(const WeightedTransitionSystem& ts, std::uint64_t epsilon,
                                     PruneReport* report = nullptr);

// Keeps a labelled transition only if (last activity of the source window,
// label) is a link-graph edge. Transitions out of i and silent transitions
// are not subject to the edge test.
WeightedTransitionSystem prune_with_link_graph(const WeightedTransitionSystem& ts, const LinkGraph& graph,
                                               PruneReport* report = nullptr);

enum class EndMode { local, global };
EndMode parse_end_mode(std::string_view name);
std::string_view to_string(EndMode mode);

double l_trans(const WeightedTransitionSystem& ts, StateId from, const Label& label, StateId to);
// Share of the incoming weight of `s` that comes straight from i.
double l_start(const WeightedTransitionSystem& ts, StateId s);
// Share of all start occurrences that enter `s`; sums to 1 over states.
double start_probability(const WeightedTransitionSystem& ts, StateId s);
// local: silent weight over outgoing weight of s.
// global: silent weight over the silent weight of all states.
double l_end(const WeightedTransitionSystem& ts, StateId s, EndMode mode = EndMode::local);

struct PathStep {
  std::string label;
  StateId to;
};

// l_start(first) * prod l_trans * l_end(last); 0 for an empty or
// disconnected path. The first step leaves i.
double path_likelihood(const WeightedTransitionSystem& ts, std::span<const PathStep> path,
                       EndMode mode = EndMode::local);
// Same, replaying an activity sequence through the window abstraction.
double path_likelihood(const WeightedTransitionSystem& ts, std::span<const std::string> activities,
                       EndMode mode = EndMode::local);

// Debug rendering, one edge per transition annotated "label/weight".
std::string to_dot(const WeightedTransitionSystem& ts);

}  // namespace clickseg
