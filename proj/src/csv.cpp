#include "csv.hpp"

#include <stdexcept>

#include "error.hpp"

namespace clickseg::csv {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split_record(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    // skip leading blanks to detect a quoted field
    std::size_t start = pos;
    while (start < line.size() && is_blank(line[start]) && line[start] != delimiter) ++start;

    if (start < line.size() && line[start] == '"') {
      std::string value;
      std::size_t i = start + 1;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            value.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        value.push_back(line[i++]);
      }
      if (!closed) throw std::invalid_argument("unterminated quoted field");
      while (i < line.size() && is_blank(line[i])) ++i;
      fields.push_back(std::move(value));
      if (i == line.size()) break;
      if (line[i] != delimiter) throw std::invalid_argument("unexpected character after quoted field");
      pos = i + 1;
      continue;
    }

    const std::size_t end = line.find(delimiter, pos);
    const auto raw = line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    fields.emplace_back(trim(raw));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return fields;
}

bool Reader::next(std::vector<std::string>& fields) {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (trim(buffer_).empty()) continue;
    try {
      fields = split_record(buffer_, delimiter_);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_, e.what());
    }
    return true;
  }
  return false;
}

void write_record(std::ostream& out, const std::vector<std::string_view>& fields, char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.put(delimiter);
    const auto f = fields[i];
    const bool quote = f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos ||
                       (!f.empty() && (is_blank(f.front()) || is_blank(f.back())));
    if (!quote) {
      out << f;
      continue;
    }
    out.put('"');
    for (char c : f) {
      if (c == '"') out.put('"');
      out.put(c);
    }
    out.put('"');
  }
  out.put('\n');
}

}  // namespace clickseg::csv
