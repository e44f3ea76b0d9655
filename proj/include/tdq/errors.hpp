#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scalar literal; `position` is the 0-based byte offset of the
/// offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
  explicit DivisionByZero(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("matrix is singular") {}
};

class NotNilpotent : public Error {
 public:
  NotNilpotent() : Error("matrix is not nilpotent") {}
};

/// A documented precondition of an operation does not hold for the input.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// The decomposition engine rejected its input or two independent
/// computations disagreed.
class EngineError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdq
