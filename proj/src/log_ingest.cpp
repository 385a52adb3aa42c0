#include "log_ingest.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "error.hpp"

namespace clickseg {

bool EventLog::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void LinkGraph::add_edge(std::string from, std::string to) {
  vertices.insert(from);
  vertices.insert(to);
  edges.emplace(std::move(from), std::move(to));
}

namespace {

std::size_t require_column(const std::vector<std::string>& header, const std::string& name,
                           const char* role) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorKind::schema,
                std::string("missing ") + role + " column '" + name + "' in event log header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

EventLog parse_event_log(std::istream& in, const ColumnSchema& schema, Diagnostics* diag) {
  EventLog log;
  log.schema = schema;
  csv::Reader reader(in, schema.delimiter);

  if (!reader.next(log.columns)) {
    throw Error(ErrorKind::schema, "event log has no header row");
  }
  const auto ts_col = require_column(log.columns, schema.timestamp, "timestamp");
  const auto act_col = require_column(log.columns, schema.activity, "activity");
  const auto user_col = require_column(log.columns, schema.user, "user");
  {
    std::set<std::string_view> seen;
    for (const auto& c : log.columns) {
      if (!seen.insert(c).second) throw Error(ErrorKind::schema, "duplicate column '" + c + "'");
    }
  }

  std::vector<std::size_t> extra_cols;
  for (std::size_t c = 0; c < log.columns.size(); ++c) {
    if (c != ts_col && c != act_col && c != user_col) {
      extra_cols.push_back(c);
      log.extra_columns.push_back(log.columns[c]);
    }
  }

  std::size_t dropped = 0;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != log.columns.size()) {
      throw ParseError(reader.line(), "expected " + std::to_string(log.columns.size()) +
                                          " fields, found " + std::to_string(fields.size()));
    }
    const auto ts = parse_timestamp(fields[ts_col]);
    if (!ts) throw ParseError(reader.line(), "malformed timestamp '" + fields[ts_col] + "'");
    if (fields[act_col].empty()) throw ParseError(reader.line(), "empty activity");
    if (fields[user_col].empty()) {
      ++dropped;
      continue;
    }
    Event e{*ts, std::move(fields[act_col]), std::move(fields[user_col]), {}};
    e.extra.reserve(extra_cols.size());
    for (auto c : extra_cols) e.extra.push_back(std::move(fields[c]));
    log.events.push_back(std::move(e));
  }

  if (diag && dropped > 0) {
    diag->dropped_prelogin += dropped;
    diag->warn("dropped " + std::to_string(dropped) + " events without a user id");
  }
  sort_events(log);
  return log;
}

EventLog parse_event_log(std::string_view text, const ColumnSchema& schema, Diagnostics* diag) {
  std::istringstream in{std::string(text)};
  return parse_event_log(in, schema, diag);
}

RowLayout::RowLayout(const std::vector<std::string>& columns, const ColumnSchema& schema) {
  std::size_t extra_index = 0;
  for (const auto& c : columns) {
    if (c == schema.timestamp) slots_.emplace_back(Role::timestamp, 0);
    else if (c == schema.activity) slots_.emplace_back(Role::activity, 0);
    else if (c == schema.user) slots_.emplace_back(Role::user, 0);
    else slots_.emplace_back(Role::extra, extra_index++);
  }
}

void RowLayout::fill(const Event& e, const std::string& timestamp, std::vector<std::string_view>& row) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    switch (slots_[i].first) {
      case Role::timestamp: row[i] = timestamp; break;
      case Role::activity: row[i] = e.activity; break;
      case Role::user: row[i] = e.user; break;
      case Role::extra: row[i] = e.extra.at(slots_[i].second); break;
    }
  }
}

void write_event_log(std::ostream& out, const EventLog& log) {
  std::vector<std::string_view> header(log.columns.begin(), log.columns.end());
  csv::write_record(out, header, log.schema.delimiter);

  const RowLayout layout(log.columns, log.schema);
  std::vector<std::string_view> row(log.columns.size());
  for (const auto& e : log.events) {
    const auto ts = format_timestamp(e.timestamp);
    layout.fill(e, ts, row);
    csv::write_record(out, row, log.schema.delimiter);
  }
}

void sort_events(EventLog& log) {
  std::stable_sort(log.events.begin(), log.events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

std::vector<UserStream> split_by_user(const EventLog& log) {
  std::map<std::string_view, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < log.events.size(); ++i) by_user[log.events[i].user].push_back(i);

  std::vector<UserStream> streams;
  streams.reserve(by_user.size());
  for (const auto& [user, indices] : by_user) {
    UserStream s{std::string(user), {}};
    s.events.reserve(indices.size());
    for (auto i : indices) s.events.push_back(log.events[i]);
    streams.push_back(std::move(s));
  }
  return streams;
}

namespace {

LinkGraph parse_link_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("link graph JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse, "link graph JSON must be an object");

  LinkGraph g;
  try {
    if (doc.contains("vertices")) {
      for (const auto& v : doc.at("vertices")) {
        auto label = v.get<std::string>();
        if (label.empty()) throw Error(ErrorKind::parse, "link graph JSON: empty vertex label");
        g.vertices.insert(std::move(label));
      }
    }
    if (doc.contains("edges")) {
      std::size_t index = 0;
      for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
          throw Error(ErrorKind::parse,
                      "link graph JSON: edge " + std::to_string(index) + " is not a [src, dst] pair");
        }
        auto from = e[0].get<std::string>();
        auto to = e[1].get<std::string>();
        if (from.empty() || to.empty()) {
          throw Error(ErrorKind::parse, "link graph JSON: edge " + std::to_string(index) + " has an empty label");
        }
        g.add_edge(std::move(from), std::move(to));
        ++index;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("link graph JSON: ") + e.what());
  }
  return g;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

LinkGraph parse_link_graph(std::string_view text, Diagnostics* diag) {
  LinkGraph g;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    g = parse_link_graph_json(text);
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;

      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      const auto arrow = line.find("->");
      if (arrow == std::string_view::npos) throw ParseError(line_no, "expected 'src -> dst'");
      const auto from = trim(line.substr(0, arrow));
      const auto to = trim(line.substr(arrow + 2));
      if (from.empty() || to.empty() || to.find("->") != std::string_view::npos) {
        throw ParseError(line_no, "expected 'src -> dst'");
      }
      g.add_edge(std::string(from), std::string(to));
    }
  }
  if (g.edges.empty() && diag) diag->warn("link graph has no edges");
  return g;
}

}  // namespace clickseg
