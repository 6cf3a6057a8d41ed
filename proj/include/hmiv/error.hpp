#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hmiv {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class ArithmeticOverflow : public Error {
 public:
  ArithmeticOverflow() : Error("decimal arithmetic overflow") {}
};

// Raised when evaluation meets an operand of the wrong type. Only reachable
// when a model is executed without having been resolved/validated.
class TypeMismatch : public Error {
 public:
  using Error::Error;
};

// An assignment produced a value outside the variable's declared domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

class NondeterminismError : public Error {
 public:
  NondeterminismError(std::string first, std::string second)
      : Error("nondeterministic step: transitions '" + first + "' and '" +
              second + "' are both enabled"),
        first_(std::move(first)),
        second_(std::move(second)) {}

  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }

 private:
  std::string first_;
  std::string second_;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace hmiv
