#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace clickseg {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// Accepts "YYYY-MM-DD HH:MM:SS[.mmm]" and ISO-8601 ("T" separator, optional
// "Z" or numeric offset). Sub-millisecond digits are only accepted when zero.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Canonical UTC rendering: "YYYY-MM-DD HH:MM:SS.mmm".
std::string format_timestamp(Timestamp ts);

}  // namespace clickseg
