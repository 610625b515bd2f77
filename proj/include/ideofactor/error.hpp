#pragma once

#include <stdexcept>
#include <string>

namespace ideofactor {

/// Malformed input: bad shapes, negative weights, unparsable files.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A factor update produced NaN or Inf.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int iteration = -1)
      : std::runtime_error(what), iteration_(iteration) {}

  /// Iteration at which the solver aborted, -1 when raised outside a fit loop.
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// Two score series share too few ids for a correlation.
class InsufficientOverlapError : public std::runtime_error {
 public:
  explicit InsufficientOverlapError(const std::string& what) : std::runtime_error(what) {}
};

/// A series has zero variance over the compared ids.
class ZeroVarianceError : public std::runtime_error {
 public:
  explicit ZeroVarianceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ideofactor
