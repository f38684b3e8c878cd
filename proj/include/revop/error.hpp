#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace revop {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

class ParseError : public UsageError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : UsageError("line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A composition table that is missing entries or has out-of-range values.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A composite whose arity (or term size) leaves the truncation bounds.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

// An internal invariant that should be unreachable failed.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace revop
