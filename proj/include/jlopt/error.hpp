#pragma once

#include <stdexcept>
#include <string>

namespace jlopt {

// Base for every error the library raises. The CLI maps the subclasses onto
// exit codes (usage/config = 1, precondition = 2, numerical = 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Requested object exceeds the desk-scale size limit.
class SizeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A numerical routine failed to converge or produced inconsistent results.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace jlopt
