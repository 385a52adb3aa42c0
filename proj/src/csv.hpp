#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace clickseg::csv {

// Splits one record. Unquoted fields are trimmed of surrounding blanks;
// quoted fields keep their content verbatim with "" unescaped. Records may
// not span lines. Throws std::invalid_argument on an unterminated quote.
std::vector<std::string> split_record(std::string_view line, char delimiter);

// Line reader that tracks 1-based line numbers and skips blank lines.
class Reader {
 public:
  Reader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

  // Returns false at end of input.
  bool next(std::vector<std::string>& fields);
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 0;
  std::string buffer_;
};

void write_record(std::ostream& out, const std::vector<std::string_view>& fields, char delimiter);

}  // namespace clickseg::csv
