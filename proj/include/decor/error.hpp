#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decor {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed BENCH text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column), detail_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    std::string out = std::to_string(line);
    if (column != 0) out += ":" + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// A circuit violates a structural invariant (cycle, undefined net, ...).
class CircuitError : public Error {
 public:
  using Error::Error;
};

/// A locking or enhancement request cannot be satisfied.
class LockError : public Error {
 public:
  using Error::Error;
};

/// Bad parameters for an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace decor
