#pragma once

#include <stdexcept>
#include <string>

namespace specorder {

/// Input violates a documented precondition (bad shape, negative mass, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a finite, converged result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specorder
