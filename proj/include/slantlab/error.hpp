#pragma once

#include <stdexcept>
#include <string>

namespace slantlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// A value fell outside the range an operation is defined on
/// (rotation angle outside [0, pi/2], log of a non-positive number, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller-side precondition did not hold (non-normal vector passed as
/// a normal, non-unit vector where a unit one is required, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The Jacobian of a chart lost rank at a parameter point.
class DegenerateImmersion : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an expression, with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, int line, int column)
      : ParseError("unknown identifier '" + name + "'", line, column), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Invalid run configuration; `line` is 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "config line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace slantlab
