#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. Line and column are 1-based; line 0 means "not
// associated with a file line" (e.g. a formula given on the command line).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), message_(message), line_(line), column_(column) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

  ParseError at_line(std::size_t line) const { return ParseError(message_, line, column_); }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    std::string where = line ? std::to_string(line) + ":" + std::to_string(column) : std::to_string(column);
    return "parse error at " + where + ": " + message;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

class UnknownFunction : public ParseError {
 public:
  UnknownFunction(const std::string& name, std::size_t line, std::size_t column)
      : ParseError("unknown function '" + name + "'", line, column), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

// A proposition had no value under the assignment it was evaluated with.
class UnboundProposition : public Error {
 public:
  explicit UnboundProposition(const std::string& name)
      : Error("unbound proposition '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// An enumeration or arity limit would be exceeded. Never silently truncated.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t requested, std::size_t cap)
      : Error(what + " cap exceeded: " + std::to_string(requested) + " > " + std::to_string(cap)) {}
};

// Well-formed input that violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace nmr
