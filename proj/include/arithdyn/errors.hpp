#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arithdyn {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class division_by_zero : public error {
 public:
  division_by_zero() : error("division by zero") {}
};

/// A documented precondition of an operation does not hold.
class domain_error : public error {
 public:
  using error::error;
};

/// A hypothesis required by a bound or search is violated.
class hypothesis_error : public error {
 public:
  using error::error;
};

/// A resource cap (depth, word count, bit size, precision) was exhausted.
class cap_exceeded : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  parse_error(const std::string& message, std::size_t line, std::size_t column)
      : error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace arithdyn
