#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xorder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric needs a positive or negative sample that the data does not have.
class EmptyClass : public Error {
 public:
  using Error::Error;
};

class EmptyGroup : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured size budget.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyMapping : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or synthetic-data parameters.
class SpecError : public Error {
 public:
  using Error::Error;
};

class GroupCountError : public Error {
 public:
  using Error::Error;
};

/// Malformed input row. `line` is 1-based and counts the header as line 1.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string column, std::string reason)
      : Error("line " + std::to_string(line) + ", column '" + column +
              "': " + reason),
        line_(line),
        column_(std::move(column)),
        reason_(std::move(reason)) {}

  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string column_;
  std::string reason_;
};

}  // namespace xorder
