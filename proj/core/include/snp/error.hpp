#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed source text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0) {
      return column == 0 ? message
                         : "column " + std::to_string(column) + ": " + message;
    }
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Structurally invalid definition (system, machine or job).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Guard expression too large to compile.
class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Invalid request at run time (bad inputs, stepping a halted machine, ...).
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// State-space exploration visited more configurations than allowed.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace snp
