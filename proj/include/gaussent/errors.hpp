#pragma once

#include <stdexcept>
#include <string>

namespace gaussent {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter violates a documented precondition
// (negative squeezing, channel parameter out of range, bad flag value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The input is not a valid state, or a closed-form expression left its
// real domain (negative discriminant, logarithm of a non-positive number).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative routine ran out of its iteration or rejection budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A postcondition that holds for every valid input failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gaussent
