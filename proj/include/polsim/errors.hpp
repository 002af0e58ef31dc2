#pragma once

#include <stdexcept>
#include <string>

namespace polsim {

// Bad run description / malformed input. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical contract violation (positivity loss, failed convergence, ...).
// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spin squeezing is undefined when the mean spin vanishes; callers that can
// tolerate it (the scenario runner) catch this subtype and emit a NaN marker.
class UndefinedSqueezingError : public NumericalError {
 public:
  UndefinedSqueezingError() : NumericalError("mean spin vanishes; squeezing undefined") {}
};

}  // namespace polsim
