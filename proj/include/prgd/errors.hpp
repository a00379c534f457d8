#pragma once

#include <stdexcept>
#include <string>

namespace prgd {

/// Caller supplied something that violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or failed to converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input (files, command lines). Carries the line number
/// when one applies.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A derived quantity does not fit the representation (e.g. an iteration
/// budget beyond 2^63).
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Broken internal invariant.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace prgd
