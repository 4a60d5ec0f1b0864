#pragma once

#include <stdexcept>
#include <string>

namespace superhedge {

/// Input or model-structure failure (bad config, violated model condition).
/// The CLI maps it to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical abort: CFL violation, NaN, non-positive price factor.
/// The CLI maps it to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace superhedge
