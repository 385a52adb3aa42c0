#include "timestamp.hpp"

#include <cstdio>

namespace clickseg {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Exactly `width` decimal digits.
  std::optional<int> digits(std::size_t width) {
    if (text_.size() - pos_ < width) return std::nullopt;
    int value = 0;
    for (std::size_t i = 0; i < width; ++i) {
      const char c = text_[pos_ + i];
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + (c - '0');
    }
    pos_ += width;
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  Cursor cur(text);

  const auto y = cur.digits(4);
  if (!y || !cur.accept('-')) return std::nullopt;
  const auto mo = cur.digits(2);
  if (!mo || !cur.accept('-')) return std::nullopt;
  const auto d = cur.digits(2);
  if (!d) return std::nullopt;
  if (!cur.accept(' ') && !cur.accept('T')) return std::nullopt;
  const auto h = cur.digits(2);
  if (!h || !cur.accept(':')) return std::nullopt;
  const auto mi = cur.digits(2);
  if (!mi || !cur.accept(':')) return std::nullopt;
  const auto s = cur.digits(2);
  if (!s) return std::nullopt;

  int millis = 0;
  if (cur.accept('.') || cur.accept(',')) {
    int n = 0;
    while (cur.peek() >= '0' && cur.peek() <= '9') {
      const int digit = cur.peek() - '0';
      if (n < 3) {
        millis = millis * 10 + digit;
      } else if (digit != 0) {
        return std::nullopt;  // would truncate
      }
      cur.accept(cur.peek());
      ++n;
    }
    if (n == 0) return std::nullopt;
    for (int i = n; i < 3; ++i) millis *= 10;
  }

  int offset_minutes = 0;
  if (cur.accept('Z')) {
  } else if (cur.peek() == '+' || cur.peek() == '-') {
    const int sign = cur.peek() == '-' ? -1 : 1;
    cur.accept(cur.peek());
    const auto oh = cur.digits(2);
    if (!oh) return std::nullopt;
    cur.accept(':');
    const auto om = cur.digits(2);
    if (!om || *oh > 23 || *om > 59) return std::nullopt;
    offset_minutes = sign * (*oh * 60 + *om);
  }
  if (!cur.done()) return std::nullopt;

  const year_month_day date{year{*y}, month{static_cast<unsigned>(*mo)},
                            day{static_cast<unsigned>(*d)}};
  if (!date.ok() || *h > 23 || *mi > 59 || *s > 59) return std::nullopt;

  return Timestamp{sys_days{date}} + hours{*h} + minutes{*mi} + seconds{*s} +
         milliseconds{millis} - minutes{offset_minutes};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day date{day_point};
  const hh_mm_ss tod{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d.%03d", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()),
                static_cast<int>(tod.subseconds().count()));
  return buf;
}

}  // namespace clickseg
