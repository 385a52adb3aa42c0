#include "segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "csv.hpp"
#include "error.hpp"

namespace clickseg {

Neighborhood parse_neighborhood(std::string_view name) {
  if (name == "k") return Neighborhood::k_terms;
  if (name == "k+1") return Neighborhood::k_plus_1_terms;
  throw Error(ErrorKind::config, "unknown neighborhood '" + std::string(name) + "' (expected k or k+1)");
}

void SegmentationParams::validate() const {
  for (double b : {b1, b2, b3}) {
    if (!(b >= 1.0) || !std::isfinite(b)) throw Error(ErrorKind::config, "b1, b2, b3 must be finite and >= 1");
  }
  if (k == 0) throw Error(ErrorKind::config, "k must be >= 1");
}

std::vector<std::size_t> detect_boundaries(std::span<const double> scores, const SegmentationParams& params) {
  params.validate();
  std::vector<std::size_t> out;
  const std::size_t n = scores.size();
  const std::size_t span = params.neighborhood == Neighborhood::k_terms ? params.k : params.k + 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double p = scores[i];
    if (!(p > params.b1 * scores[i - 1])) continue;
    if (!(p > params.b2 * scores[i + 1])) continue;
    const std::size_t first = i >= span ? i - span : 0;
    double sum = 0.0;
    for (std::size_t j = first; j < i; ++j) sum += scores[j];
    // fewer than k predecessors: mean over the available ones
    const std::size_t available = i - first;
    const double divisor = available >= span ? static_cast<double>(params.k) : static_cast<double>(available);
    if (!(p > params.b3 * (sum / divisor))) continue;
    out.push_back(i + 1);
  }
  return out;
}

std::string make_case_id(std::string_view user, std::size_t ordinal) {
  return std::string(user) + "#" + std::to_string(ordinal);
}

std::vector<Case> split_stream(const UserStream& stream, std::span<const std::size_t> boundaries) {
  std::vector<Case> cases;
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {
    Case c{make_case_id(stream.user, cases.size() + 1), stream.user, {}};
    c.events.assign(stream.events.begin() + static_cast<std::ptrdiff_t>(begin),
                    stream.events.begin() + static_cast<std::ptrdiff_t>(end));
    cases.push_back(std::move(c));
    begin = end;
  };
  for (auto b : boundaries) {
    if (b <= begin || b >= stream.events.size()) {
      throw Error(ErrorKind::invalid_argument, "boundary " + std::to_string(b) + " is not a valid split of a " +
                                                   std::to_string(stream.events.size()) + "-event stream");
    }
    emit(b);
  }
  if (!stream.events.empty()) emit(stream.events.size());
  return cases;
}

SegmentedLog segment_log(const EventLog& log, std::span<const CbowModel* const> models,
                         const SegmentationParams& params, Aggregation aggregation, unsigned threads,
                         Diagnostics* diag) {
  params.validate();
  if (models.empty()) throw Error(ErrorKind::invalid_argument, "no model to segment with");

  SegmentedLog out{log.columns, log.extra_columns, log.schema, {}};
  const auto streams = split_by_user(log);
  std::vector<std::vector<Case>> per_user(streams.size());
  std::vector<Diagnostics> per_user_diag(streams.size());
  std::vector<std::exception_ptr> errors(streams.size());

  auto run = [&](std::size_t u) {
    try {
      std::vector<std::string> activities;
      activities.reserve(streams[u].events.size());
      for (const auto& e : streams[u].events) activities.push_back(e.activity);
      const auto scores = boundary_scores(models, activities, aggregation, &per_user_diag[u]);
      const auto boundaries = detect_boundaries(scores, params);
      per_user[u] = split_stream(streams[u], boundaries);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(streams.size())));
  if (workers <= 1) {
    for (std::size_t u = 0; u < streams.size(); ++u) run(u);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t u = w; u < streams.size(); u += workers) run(u);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t u = 0; u < streams.size(); ++u) {
    for (auto& c : per_user[u]) out.cases.push_back(std::move(c));
    if (diag) diag->merge(per_user_diag[u]);
  }
  return out;
}

void write_segmented_log(std::ostream& out, const SegmentedLog& log) {
  std::vector<std::string_view> header(log.columns.begin(), log.columns.end());
  header.push_back(kCaseColumn);
  csv::write_record(out, header, log.schema.delimiter);

  const RowLayout layout(log.columns, log.schema);
  std::vector<std::string_view> row(log.columns.size() + 1);
  for (const auto& c : log.cases) {
    for (const auto& e : c.events) {
      const auto ts = format_timestamp(e.timestamp);
      layout.fill(e, ts, row);
      row.back() = c.case_id;
      csv::write_record(out, row, log.schema.delimiter);
    }
  }
}

SegmentedLog read_segmented_log(std::istream& in, const ColumnSchema& schema, std::string_view case_column) {
  EventLog flat = parse_event_log(in, schema);
  const auto it = std::find(flat.extra_columns.begin(), flat.extra_columns.end(), case_column);
  if (it == flat.extra_columns.end()) {
    throw Error(ErrorKind::schema, "missing case column '" + std::string(case_column) + "'");
  }
  const auto case_index = static_cast<std::size_t>(it - flat.extra_columns.begin());

  SegmentedLog out;
  out.schema = schema;
  out.extra_columns = flat.extra_columns;
  out.extra_columns.erase(out.extra_columns.begin() + static_cast<std::ptrdiff_t>(case_index));
  for (const auto& c : flat.columns) {
    if (c != case_column) out.columns.push_back(c);
  }

  for (auto& stream : split_by_user(flat)) {
    std::set<std::string> finished;
    for (auto& e : stream.events) {
      std::string id = std::move(e.extra[case_index]);
      e.extra.erase(e.extra.begin() + static_cast<std::ptrdiff_t>(case_index));
      if (id.empty()) throw Error(ErrorKind::schema, "event of user '" + stream.user + "' has an empty case id");
      if (out.cases.empty() || out.cases.back().user != stream.user || out.cases.back().case_id != id) {
        if (!out.cases.empty() && out.cases.back().user == stream.user) finished.insert(out.cases.back().case_id);
        if (finished.contains(id)) {
          throw Error(ErrorKind::schema, "case '" + id + "' of user '" + stream.user + "' is not contiguous in time");
        }
        out.cases.push_back(Case{id, stream.user, {}});
      }
      out.cases.back().events.push_back(std::move(e));
    }
  }
  return out;
}

EventLog to_event_log(const SegmentedLog& log) {
  EventLog out;
  out.columns = log.columns;
  out.extra_columns = log.extra_columns;
  out.schema = log.schema;
  for (const auto& c : log.cases) out.events.insert(out.events.end(), c.events.begin(), c.events.end());
  sort_events(out);
  return out;
}

}  // namespace clickseg
