#pragma once

// Updates for a single dual coordinate nu of the min-min form
//
//     min_nu  E[e^{s - nu}] + nu,
//
// whose minimizer is nu* = log E[e^s]. All exponentials are evaluated in the
// log domain through logaddexp, so s and nu may be far outside the range
// where e^s is representable.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "scent/logexp.hpp"
#include "scent/step_size.hpp"

namespace scent {

struct Bounds {
  double lo;
  double hi;

  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

// Bregman divergence of the potential phi(nu) = e^{-nu}:
//   D(a, b) = e^{-a} - e^{-b} + e^{-b} (a - b)
// Written as e^{-b} (expm1(b - a) + (a - b)) to keep precision when a ~ b.
inline double bregman_exp(double a, double b) {
  const double d = a - b;
  const double value = std::exp(-b) * (std::expm1(-d) + d);
  return value < 0.0 ? 0.0 : value;
}

// Proximal mirror step on one sample:
//   argmin_nu  e^{s - nu} + nu + D(nu, nu_prev) / alpha
// Closed form: e^{nu} = (e^{nu_prev} + alpha e^{nu_prev} e^{s}) / (1 + alpha e^{nu_prev}),
// evaluated as nu_prev + log1p(alpha e^s) - log1p(alpha e^{nu_prev}).
// The infinite step returns s.
inline double spmd_step(double nu_prev, double s_value, StepSize alpha) {
  if (alpha.is_infinite()) return s_value;
  if (!alpha.is_valid_finite()) throw std::invalid_argument("spmd_step: alpha must be positive");
  const double log_alpha = alpha.log_value();
  return nu_prev + softplus(log_alpha + s_value) - softplus(log_alpha + nu_prev);
}

// Same step with e^s replaced by the batch mean of e^{s_j}.
inline double spmd_step_batch(double nu_prev, std::span<const double> s_values, StepSize alpha) {
  if (s_values.empty()) throw std::invalid_argument("spmd_step_batch: empty batch");
  return spmd_step(nu_prev, logmeanexp(s_values), alpha);
}

// Projected SGD on nu with stochastic gradient 1 - e^{s - nu}. Without a clamp
// this is the plain alternating-SGD dual step, which can overflow to +inf.
inline double dual_sgd_step(double nu_prev, double s_value, double alpha_prime,
                            std::optional<Bounds> clamp) {
  if (!(alpha_prime > 0.0)) throw std::invalid_argument("dual_sgd_step: alpha' must be positive");
  if (clamp && clamp->lo > clamp->hi) throw std::invalid_argument("dual_sgd_step: c0 > c1");
  const double grad = -std::expm1(s_value - nu_prev);
  const double next = nu_prev - alpha_prime * grad;
  return clamp ? clamp->clamp(next) : next;
}

// Softplus surrogate of e^{x}: log(1 + rho e^{x}) / rho.
inline double softplus_dual_value(double s_minus_nu, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("softplus_dual_value: rho must be positive");
  return softplus(std::log(rho) + s_minus_nu) / rho;
}

// d/dx of softplus_dual_value: e^{x} / (1 + rho e^{x}). Bounded by 1/rho.
inline double softplus_dual_weight(double s_minus_nu, double rho) {
  return 1.0 / (std::exp(-s_minus_nu) + rho);
}

// SGD step on the softplus surrogate, averaged over a batch of scores.
inline double softplus_dual_sgd_step(double nu_prev, std::span<const double> s_values,
                                     double alpha_prime, double rho,
                                     std::optional<Bounds> clamp) {
  if (s_values.empty()) throw std::invalid_argument("softplus_dual_sgd_step: empty batch");
  if (!(alpha_prime > 0.0)) throw std::invalid_argument("softplus_dual_sgd_step: alpha' must be positive");
  double mean_weight = 0.0;
  for (double s : s_values) mean_weight += softplus_dual_weight(s - nu_prev, rho);
  mean_weight /= static_cast<double>(s_values.size());
  const double next = nu_prev - alpha_prime * (1.0 - mean_weight);
  return clamp ? clamp->clamp(next) : next;
}

// Step size that makes e^{nu_t} the running mean of e^{s_1..s_t}:
// infinite at t = 1, then e^{-nu_prev} / (t - 1).
inline StepSize erm_rate_state(double nu_prev, std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("erm_rate_state: t starts at 1");
  if (t == 1) return StepSize::infinite();
  return StepSize::from_log(-nu_prev - std::log(static_cast<double>(t - 1)));
}

}  // namespace scent
