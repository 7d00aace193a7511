#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace servokit {

class ServokitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a servo step is asked to act on a dropped detection.
class InvalidObservation : public ServokitError {
 public:
  using ServokitError::ServokitError;
};

/// The feature Jacobian is too close to singular to invert safely.
class IllConditioned : public ServokitError {
 public:
  IllConditioned(const std::string& what, double condition)
      : ServokitError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class GridTooLarge : public ServokitError {
 public:
  GridTooLarge(const std::string& what, std::size_t count)
      : ServokitError(what), count_(count) {}
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

/// Malformed configuration text. line() is 1-based, 0 when not tied to a line.
class ParseError : public ServokitError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ServokitError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a documented invariant.
class ValidationError : public ServokitError {
 public:
  using ServokitError::ServokitError;
};

}  // namespace servokit
