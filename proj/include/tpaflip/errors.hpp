#pragma once

#include <stdexcept>
#include <string>

namespace tpaflip {

/// Raised when a model type is constructed from invalid parameters.
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the unflipped TPA rate vanishes, so g = P(δs)/P(0) is undefined.
class degenerate_baseline : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its budget before meeting the requested tolerance.
class tolerance_not_reached : public std::runtime_error {
 public:
  tolerance_not_reached(const std::string& what, double error_estimate, double requested)
      : std::runtime_error(what), error_estimate_(error_estimate), requested_(requested) {}

  double error_estimate() const noexcept { return error_estimate_; }
  double requested() const noexcept { return requested_; }

 private:
  double error_estimate_;
  double requested_;
};

}  // namespace tpaflip
