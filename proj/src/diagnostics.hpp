#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace clickseg {

// Counted, non-fatal conditions raised along the pipeline.
struct Diagnostics {
  std::size_t dropped_prelogin = 0;
  std::size_t empty_streams = 0;
  std::size_t forced_endings = 0;
  std::size_t max_length_stops = 0;
  std::size_t discarded_short_traces = 0;
  std::size_t unknown_activities = 0;
  std::size_t unscorable_gaps = 0;
  std::set<std::string> unknown_labels;
  std::vector<std::string> messages;

  void warn(std::string message) { messages.push_back(std::move(message)); }

  void merge(const Diagnostics& other) {
    dropped_prelogin += other.dropped_prelogin;
    empty_streams += other.empty_streams;
    forced_endings += other.forced_endings;
    max_length_stops += other.max_length_stops;
    discarded_short_traces += other.discarded_short_traces;
    unknown_activities += other.unknown_activities;
    unscorable_gaps += other.unscorable_gaps;
    unknown_labels.insert(other.unknown_labels.begin(), other.unknown_labels.end());
    messages.insert(messages.end(), other.messages.begin(), other.messages.end());
  }
};

}  // namespace clickseg
