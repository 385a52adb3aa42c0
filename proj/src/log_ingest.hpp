#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diagnostics.hpp"
#include "timestamp.hpp"

namespace clickseg {

// Maps the columns of a click-data CSV onto event roles.
struct ColumnSchema {
  std::string timestamp = "timestamp";
  std::string activity = "screen";
  std::string user = "user";
  char delimiter = ',';
};

struct Event {
  Timestamp timestamp;
  std::string activity;
  std::string user;
  // Values of the non-role columns, aligned with EventLog::extra_columns.
  std::vector<std::string> extra;

  friend bool operator==(const Event&, const Event&) = default;
};

// Events sorted by (timestamp, input position).
struct EventLog {
  // Header as read, used to reproduce the input layout on output.
  std::vector<std::string> columns;
  std::vector<std::string> extra_columns;
  ColumnSchema schema;
  std::vector<Event> events;

  bool has_column(std::string_view name) const;

  friend bool operator==(const EventLog& a, const EventLog& b) {
    return a.columns == b.columns && a.extra_columns == b.extra_columns && a.events == b.events;
  }
};

struct UserStream {
  std::string user;
  std::vector<Event> events;
};

struct LinkGraph {
  std::set<std::string> vertices;
  std::set<std::pair<std::string, std::string>> edges;

  bool has_edge(const std::string& from, const std::string& to) const {
    return edges.contains({from, to});
  }
  void add_edge(std::string from, std::string to);
};

// Places the fields of an event in header order.
class RowLayout {
 public:
  RowLayout(const std::vector<std::string>& columns, const ColumnSchema& schema);

  // `row` must have at least columns.size() entries; the views point into
  // `e` and `timestamp`.
  void fill(const Event& e, const std::string& timestamp, std::vector<std::string_view>& row) const;

 private:
  enum class Role { timestamp, activity, user, extra };
  std::vector<std::pair<Role, std::size_t>> slots_;
};

// Rows with an empty user id are dropped and counted as pre-login events.
// Throws Error(schema) when a role column is missing and ParseError for
// malformed rows.
EventLog parse_event_log(std::istream& in, const ColumnSchema& schema, Diagnostics* diag = nullptr);
EventLog parse_event_log(std::string_view text, const ColumnSchema& schema, Diagnostics* diag = nullptr);

// Writes the log with its original header; timestamps in canonical form.
void write_event_log(std::ostream& out, const EventLog& log);

// Orders the events of an unsorted log; ties keep their current order.
void sort_events(EventLog& log);

// One stream per user, ordered by user id.
std::vector<UserStream> split_by_user(const EventLog& log);

// Edge list ("A -> B" per line, '#' comments) or JSON
// {"vertices": [...], "edges": [["A","B"], ...]}.
LinkGraph parse_link_graph(std::string_view text, Diagnostics* diag = nullptr);

}  // namespace clickseg
