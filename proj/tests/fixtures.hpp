#pragma once

#include <string>
#include <vector>

#include "log_ingest.hpp"

namespace clickseg::testing {

// Three unsegmented user interactions over screens M, A, B, C.
inline std::vector<std::vector<std::string>> running_example_streams() {
  return {{"M", "A", "M", "B", "C"}, {"M", "B", "C", "M"}, {"M", "A", "B", "C"}};
}

inline constexpr const char* kRunningExampleGraph = "M -> A\nM -> B\nA -> B\nB -> C\nC -> M\n";

inline LinkGraph running_example_graph() { return parse_link_graph(kRunningExampleGraph); }

inline constexpr const char* kSampleClicksCsv =
    "timestamp, screen, user, team, os\n"
    "2021-01-25 23:00:00.939, pre_booking, b0b00, 2070b, iOS\n"
    "2021-01-25 23:00:03.435, tariffs, b0b00, 2070b, iOS\n"
    "2021-01-25 23:00:04.683, menu, 3fc0c, 02d1f, Android\n"
    "2021-01-25 23:00:05.507, my_bookings, 3fc0c, 02d1f, Android\n";

}  // namespace clickseg::testing
