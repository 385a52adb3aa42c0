#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clickseg {

enum class ErrorKind {
  invalid_argument,
  config,
  io,
  parse,
  schema,
  degenerate,
  vocabulary,
  version,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure tied to a 1-based line of the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace clickseg
