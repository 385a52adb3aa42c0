#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbow.hpp"
#include "diagnostics.hpp"
#include "log_ingest.hpp"

namespace clickseg {

// How the neighbourhood mean of the third peak condition is formed.
enum class Neighborhood {
  k_terms,        // p[i-k .. i-1] / k
  k_plus_1_terms  // p[i-k-1 .. i-1] / k, the literal summation bounds
};
Neighborhood parse_neighborhood(std::string_view name);

struct SegmentationParams {
  double b1 = 1.2;
  double b2 = 1.2;
  double b3 = 1.5;
  std::size_t k = 5;
  Neighborhood neighborhood = Neighborhood::k_terms;

  void validate() const;
};

// Positions are 1-based gap indices: position g splits a stream after its
// g-th event, and scores[g - 1] is the score of that gap. A gap is a
// boundary when its score beats b1 x its predecessor, b2 x its successor and
// b3 x the mean of up to k preceding scores (fewer near the left edge). The
// first and last gap are never boundaries.
std::vector<std::size_t> detect_boundaries(std::span<const double> scores, const SegmentationParams& params);

struct Case {
  std::string case_id;
  std::string user;
  std::vector<Event> events;
};

// Cases ordered by user id, then by ordinal.
struct SegmentedLog {
  std::vector<std::string> columns;  // input header, without the case column
  std::vector<std::string> extra_columns;
  ColumnSchema schema;
  std::vector<Case> cases;
};

inline constexpr std::string_view kCaseColumn = "case_id";

std::string make_case_id(std::string_view user, std::size_t ordinal);

// |boundaries| + 1 contiguous cases with ids "<user>#<ordinal>", ordinal
// starting at 1. Boundary positions must be strictly inside the stream.
std::vector<Case> split_stream(const UserStream& stream, std::span<const std::size_t> boundaries);

// split_by_user -> boundary_scores -> detect_boundaries -> split_stream for
// every user. Per-user work is spread over `threads` workers.
SegmentedLog segment_log(const EventLog& log, std::span<const CbowModel* const> models,
                         const SegmentationParams& params, Aggregation aggregation = Aggregation::mean,
                         unsigned threads = 1, Diagnostics* diag = nullptr);

// Input columns plus the case column; rows in (user, case ordinal, time) order.
void write_segmented_log(std::ostream& out, const SegmentedLog& log);

// Reads a CSV carrying a case column. Cases are rebuilt per user in time
// order; a case id seen again after another case of the same user is an error.
SegmentedLog read_segmented_log(std::istream& in, const ColumnSchema& schema,
                                std::string_view case_column = kCaseColumn);

// Flattens back into an unsegmented event log (case column removed).
EventLog to_event_log(const SegmentedLog& log);

}  // namespace clickseg
