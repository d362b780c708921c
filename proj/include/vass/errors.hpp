#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vass {

// A step would leave the domain (a finite coordinate went negative).
class DomainViolation : public std::runtime_error {
 public:
  DomainViolation(std::size_t step_index, const std::string& what)
      : std::runtime_error(what), step_index_(step_index) {}
  [[nodiscard]] std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

// A configured cap was exceeded; results computed so far are not complete.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result failed its own re-validation; indicates a bug.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PreconditionUnmet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LiftUndefined : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotEff2D : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation that needs a satisfiable system was handed an unsatisfiable one.
class Unsatisfiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace vass
