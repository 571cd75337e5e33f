#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smcedp {

/* Base class for everything this library throws on purpose. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/* Formula text rejected by the tokenizer or parser. Carries the 1-based
 * line/column of the offending token. */
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/* Temporal interval with lower >= upper (or otherwise unusable bounds). */
class BoundError : public ParseError {
 public:
  BoundError(std::size_t line, std::size_t column, const std::string& message)
      : ParseError(line, column, message) {}
};

/* Bad configuration: unknown key, missing required key, value out of range. */
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/* A sample source failed: unreadable trace, malformed CSV, exhausted pool. */
class SourceError : public Error {
 public:
  explicit SourceError(const std::string& what) : Error(what) {}
};

/* An operation was called outside its mathematical domain (zero drift,
 * off-grid time point, empty outcome list, ...). */
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

}  // namespace smcedp
