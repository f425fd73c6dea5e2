#pragma once

#include <stdexcept>
#include <string>

namespace gcelab {

/// Malformed input or a violated precondition. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method (root finder, homotopy, Newton) failed to converge.
/// Maps to CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes that must agree did not. Maps to CLI exit code 4.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gcelab
