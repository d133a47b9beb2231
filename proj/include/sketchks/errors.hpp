#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sketchks {

/// Argument outside the mathematical domain of an operation (bad p, alpha, delta...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation not valid in the object's current state (empty or unsealed sketch, size mismatch).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rejected input data, e.g. NaN or infinite observations.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sketchks
