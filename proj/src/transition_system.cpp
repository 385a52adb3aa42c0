#include "transition_system.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "error.hpp"

namespace clickseg {

WeightedTransitionSystem::WeightedTransitionSystem(std::size_t window) : window_(window) {
  if (window == 0) throw Error(ErrorKind::invalid_argument, "transition system window must be >= 1");
  windows_.resize(2);
  outgoing_.resize(2);
  incoming_.resize(2);
  out_total_.resize(2, 0);
  in_total_.resize(2, 0);
}

StateId WeightedTransitionSystem::add_state(const Window& window) {
  if (window.empty() || window.size() > window_) {
    throw Error(ErrorKind::invalid_argument, "state window length must be in [1, " + std::to_string(window_) + "]");
  }
  const auto [it, inserted] = state_index_.emplace(window, windows_.size());
  if (inserted) {
    windows_.push_back(window);
    outgoing_.emplace_back();
    incoming_.emplace_back();
    out_total_.push_back(0);
    in_total_.push_back(0);
  }
  return it->second;
}

std::optional<StateId> WeightedTransitionSystem::find_state(const Window& window) const {
  const auto it = state_index_.find(window);
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

std::string WeightedTransitionSystem::state_name(StateId s) const {
  if (s == initial) return "i";
  if (s == final_sink) return "f";
  std::string name = "(";
  const auto& w = windows_.at(s);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) name += ',';
    name += w[k];
  }
  return name + ")";
}

void WeightedTransitionSystem::add(StateId from, const Label& label, StateId to, std::uint64_t count) {
  if (from >= state_count() || to >= state_count()) {
    throw Error(ErrorKind::invalid_argument, "transition references an unknown state");
  }
  if (from == final_sink) throw Error(ErrorKind::invalid_argument, "the final sink has no outgoing transitions");
  if (to == initial) throw Error(ErrorKind::invalid_argument, "the initial state has no incoming transitions");
  if (label.has_value() == (to == final_sink)) {
    throw Error(ErrorKind::invalid_argument, "silent transitions, and only those, must enter the final sink");
  }
  if (label) {
    Window expected = windows_[from];
    expected.push_back(*label);
    if (expected.size() > window_) expected.erase(expected.begin());
    if (expected != windows_[to]) {
      throw Error(ErrorKind::invalid_argument,
                  "transition " + state_name(from) + " -" + *label + "-> " + state_name(to) +
                      " does not follow the window abstraction");
    }
  }
  if (count == 0) return;

  const auto [it, inserted] = transition_index_.emplace(Key{from, label, to}, transitions_.size());
  if (inserted) {
    transitions_.push_back(Transition{from, label, to, 0});
    outgoing_[from].push_back(it->second);
    incoming_[to].push_back(it->second);
  }
  transitions_[it->second].weight += count;
  out_total_[from] += count;
  in_total_[to] += count;
}

std::uint64_t WeightedTransitionSystem::weight(StateId from, const Label& label, StateId to) const {
  const auto it = transition_index_.find(Key{from, label, to});
  return it == transition_index_.end() ? 0 : transitions_[it->second].weight;
}

WeightedTransitionSystem build_merged_ts(const std::vector<std::vector<std::string>>& sequences,
                                         std::size_t window, Diagnostics* diag) {
  WeightedTransitionSystem ts(window);
  std::size_t empty = 0;
  Window current;
  for (const auto& seq : sequences) {
    if (seq.empty()) {
      ++empty;
      continue;
    }
    current.clear();
    StateId from = WeightedTransitionSystem::initial;
    for (const auto& activity : seq) {
      current.push_back(activity);
      if (current.size() > window) current.erase(current.begin());
      const StateId to = ts.add_state(current);
      ts.add(from, activity, to);
      from = to;
    }
    ts.add(from, std::nullopt, WeightedTransitionSystem::final_sink);
  }
  if (diag && empty > 0) {
    diag->empty_streams += empty;
    diag->warn("skipped " + std::to_string(empty) + " empty streams");
  }
  return ts;
}

WeightedTransitionSystem build_merged_ts(std::span<const UserStream> streams, std::size_t window,
                                         Diagnostics* diag) {
  std::vector<std::vector<std::string>> sequences;
  sequences.reserve(streams.size());
  for (const auto& s : streams) {
    auto& seq = sequences.emplace_back();
    seq.reserve(s.events.size());
    for (const auto& e : s.events) seq.push_back(e.activity);
  }
  return build_merged_ts(sequences, window, diag);
}

namespace {

WeightedTransitionSystem restrict(const WeightedTransitionSystem& ts,
                                  const std::function<bool(const Transition&)>& keep, PruneReport* report) {
  std::vector<bool> kept(ts.transition_count());
  std::size_t rejected = 0;
  for (std::size_t t = 0; t < ts.transition_count(); ++t) {
    kept[t] = keep(ts.transitions()[t]);
    if (!kept[t]) ++rejected;
  }

  std::vector<bool> reachable(ts.state_count(), false);
  std::deque<StateId> queue{WeightedTransitionSystem::initial};
  reachable[WeightedTransitionSystem::initial] = true;
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (auto t : ts.outgoing(s)) {
      const auto to = ts.transitions()[t].to;
      if (kept[t] && !reachable[to]) {
        reachable[to] = true;
        queue.push_back(to);
      }
    }
  }

  WeightedTransitionSystem out(ts.window());
  std::vector<StateId> remap(ts.state_count());
  remap[WeightedTransitionSystem::initial] = WeightedTransitionSystem::initial;
  remap[WeightedTransitionSystem::final_sink] = WeightedTransitionSystem::final_sink;
  std::size_t unreachable_states = 0;
  for (StateId s = 2; s < ts.state_count(); ++s) {
    if (reachable[s]) remap[s] = out.add_state(ts.window_of(s));
    else ++unreachable_states;
  }

  std::size_t unreachable_transitions = 0;
  for (std::size_t t = 0; t < ts.transition_count(); ++t) {
    if (!kept[t]) continue;
    const auto& tr = ts.transitions()[t];
    if (!reachable[tr.from]) {
      ++unreachable_transitions;
      continue;
    }
    out.add(remap[tr.from], tr.label, remap[tr.to], tr.weight);
  }

  if (report) *report = PruneReport{rejected, unreachable_states, unreachable_transitions};
  return out;
}

}  // namespace

WeightedTransitionSystem filter_rare(const WeightedTransitionSystem& ts, std::uint64_t epsilon,
                                     PruneReport* report) {
  return restrict(ts, [epsilon](const Transition& t) { return t.weight >= epsilon; }, report);
}

WeightedTransitionSystem prune_with_link_graph(const WeightedTransitionSystem& ts, const LinkGraph& graph,
                                               PruneReport* report) {
  return restrict(
      ts,
      [&](const Transition& t) {
        if (t.silent() || t.from == WeightedTransitionSystem::initial) return true;
        return graph.has_edge(ts.window_of(t.from).back(), *t.label);
      },
      report);
}

EndMode parse_end_mode(std::string_view name) {
  if (name == "local") return EndMode::local;
  if (name == "global") return EndMode::global;
  throw Error(ErrorKind::config, "unknown end mode '" + std::string(name) + "' (expected local or global)");
}

std::string_view to_string(EndMode mode) { return mode == EndMode::local ? "local" : "global"; }

double l_trans(const WeightedTransitionSystem& ts, StateId from, const Label& label, StateId to) {
  if (from >= ts.state_count()) return 0.0;
  const auto total = ts.outgoing_weight(from);
  if (total == 0) return 0.0;
  return static_cast<double>(ts.weight(from, label, to)) / static_cast<double>(total);
}

double l_start(const WeightedTransitionSystem& ts, StateId s) {
  if (s >= ts.state_count()) return 0.0;
  const auto total = ts.incoming_weight(s);
  if (total == 0) return 0.0;
  std::uint64_t from_initial = 0;
  for (auto t : ts.incoming(s)) {
    if (ts.transitions()[t].from == WeightedTransitionSystem::initial) from_initial += ts.transitions()[t].weight;
  }
  return static_cast<double>(from_initial) / static_cast<double>(total);
}

double start_probability(const WeightedTransitionSystem& ts, StateId s) {
  if (s >= ts.state_count()) return 0.0;
  const auto total = ts.outgoing_weight(WeightedTransitionSystem::initial);
  if (total == 0) return 0.0;
  std::uint64_t w = 0;
  for (auto t : ts.outgoing(WeightedTransitionSystem::initial)) {
    if (ts.transitions()[t].to == s) w += ts.transitions()[t].weight;
  }
  return static_cast<double>(w) / static_cast<double>(total);
}

double l_end(const WeightedTransitionSystem& ts, StateId s, EndMode mode) {
  if (s >= ts.state_count()) return 0.0;
  const auto silent = ts.weight(s, std::nullopt, WeightedTransitionSystem::final_sink);
  if (silent == 0) return 0.0;
  const auto total = mode == EndMode::local ? ts.outgoing_weight(s)
                                            : ts.incoming_weight(WeightedTransitionSystem::final_sink);
  return static_cast<double>(silent) / static_cast<double>(total);
}

double path_likelihood(const WeightedTransitionSystem& ts, std::span<const PathStep> path, EndMode mode) {
  if (path.empty()) return 0.0;
  if (ts.weight(WeightedTransitionSystem::initial, path.front().label, path.front().to) == 0) return 0.0;
  double p = l_start(ts, path.front().to);
  for (std::size_t k = 1; k < path.size(); ++k) {
    p *= l_trans(ts, path[k - 1].to, path[k].label, path[k].to);
  }
  return p * l_end(ts, path.back().to, mode);
}

double path_likelihood(const WeightedTransitionSystem& ts, std::span<const std::string> activities, EndMode mode) {
  std::vector<PathStep> path;
  Window current;
  for (const auto& a : activities) {
    current.push_back(a);
    if (current.size() > ts.window()) current.erase(current.begin());
    const auto s = ts.find_state(current);
    if (!s) return 0.0;
    path.push_back(PathStep{a, *s});
  }
  return path_likelihood(ts, path, mode);
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const WeightedTransitionSystem& ts) {
  std::ostringstream out;
  out << "digraph {\n";
  for (StateId s = 0; s < ts.state_count(); ++s) {
    out << "  " << dot_quote(ts.state_name(s)) << ";\n";
  }
  for (const auto& t : ts.transitions()) {
    const std::string label = (t.label ? *t.label : std::string("tau")) + "/" + std::to_string(t.weight);
    out << "  " << dot_quote(ts.state_name(t.from)) << " -> " << dot_quote(ts.state_name(t.to))
        << " [label=" << dot_quote(label) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace clickseg
