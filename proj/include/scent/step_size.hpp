#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scent {

// A dual step size: a finite positive real or the distinguished infinite
// value. The infinite variant never enters arithmetic; updates that accept it
// branch on is_infinite() first. Finite steps also carry their logarithm so
// that steps like e^{-nu} with large nu do not underflow on the way through.
class StepSize {
 public:
  static StepSize finite(double value) {
    const double log_value = value > 0.0 ? std::log(value) : std::numeric_limits<double>::quiet_NaN();
    return StepSize(value, log_value, false);
  }
  static StepSize from_log(double log_value) { return StepSize(std::exp(log_value), log_value, false); }
  static constexpr StepSize infinite() { return StepSize(0.0, 0.0, true); }

  constexpr bool is_infinite() const noexcept { return infinite_; }

  // Finite, strictly positive, and not +inf.
  bool is_valid_finite() const noexcept { return !infinite_ && std::isfinite(log_value_); }

  double value() const {
    if (infinite_) throw std::logic_error("StepSize::value() on the infinite step");
    return value_;
  }

  double log_value() const {
    if (infinite_) throw std::logic_error("StepSize::log_value() on the infinite step");
    return log_value_;
  }

 private:
  constexpr StepSize(double value, double log_value, bool infinite)
      : value_(value), log_value_(log_value), infinite_(infinite) {}

  double value_;
  double log_value_;
  bool infinite_;
};

}  // namespace scent
