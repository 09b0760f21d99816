// Exception types shared by every slr-hammer component.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slrh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the supported fragment (non-Horn on the Datalog path,
/// residual non-bound theory atoms, and so on).
class UnsupportedFragment : public Error {
 public:
  using Error::Error;
};

class NonPositiveConjecture : public UnsupportedFragment {
 public:
  using UnsupportedFragment::UnsupportedFragment;
};

class UnsupportedAtom : public UnsupportedFragment {
 public:
  using UnsupportedFragment::UnsupportedFragment;
};

class NonLinear : public UnsupportedFragment {
 public:
  using UnsupportedFragment::UnsupportedFragment;
};

/// A configured size or resource cap was exceeded.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

class NotStratified : public Error {
 public:
  using Error::Error;
};

class NotComplementary : public Error {
 public:
  using Error::Error;
};

class GoalPresent : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

/// Sorted borders did not alternate lower/upper. Indicates an internal bug.
class MalformedBorders : public Error {
 public:
  using Error::Error;
};

}  // namespace slrh
