#pragma once

// Scalar dual problems with w omitted:
//
//     F(nu) = E[e^{s - nu}] + nu = m e^{-nu} + nu,   z = e^s, m = E z,
//
// minimized at nu* = log m.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "scent/dual_updates.hpp"
#include "scent/rng.hpp"

namespace scent {

struct DistributionStats {
  double m;
  double var_z;
  double kappa;    // E z^2 / m^2 = 1 + var_z / m^2
  double nu_star;  // log m
};

// F(nu) - F(nu*) = u - 1 + e^{-u} with u = nu - nu*.
inline double dual_gap(double nu, double nu_star) {
  const double u = nu - nu_star;
  return std::expm1(-u) + u;
}

class DualOnlyProblem {
 public:
  enum class Kind { gaussian, two_point };

  // s ~ N(mu, sigma^2), z lognormal.
  static DualOnlyProblem gaussian(double mu, double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("gaussian: need sigma >= 0 and finite mu");
    DualOnlyProblem p(Kind::gaussian);
    p.mu_ = mu;
    p.sigma_ = sigma;
    const double s2 = sigma * sigma;
    p.stats_.nu_star = mu + 0.5 * s2;
    p.stats_.m = std::exp(p.stats_.nu_star);
    p.stats_.kappa = std::exp(s2);
    p.stats_.var_z = p.stats_.m * p.stats_.m * std::expm1(s2);
    return p;
  }

  // z = high with probability p, otherwise low.
  static DualOnlyProblem two_point(double low, double high, double p) {
    if (!(low > 0.0) || !(high >= low)) throw std::invalid_argument("two_point: need 0 < low <= high");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("two_point: p outside [0, 1]");
    DualOnlyProblem d(Kind::two_point);
    d.low_ = low;
    d.high_ = high;
    d.p_ = p;
    const double m = low + p * (high - low);
    const double var = p * (1.0 - p) * (high - low) * (high - low);
    d.stats_ = {m, var, 1.0 + var / (m * m), std::log(m)};
    return d;
  }

  Kind kind() const { return kind_; }
  const DistributionStats& stats() const { return stats_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double low() const { return low_; }
  double high() const { return high_; }
  double p() const { return p_; }

  // Range of s; only the two-point law is bounded.
  std::optional<Bounds> bounds() const {
    if (kind_ == Kind::two_point) return Bounds{std::log(low_), std::log(high_)};
    return std::nullopt;
  }

  double sample_score(Rng& rng) const {
    if (kind_ == Kind::gaussian) return mu_ + sigma_ * rng.normal();
    return rng.uniform() < p_ ? std::log(high_) : std::log(low_);
  }

  double objective(double nu) const { return stats_.m * std::exp(-nu) + nu; }
  double gap(double nu) const { return dual_gap(nu, stats_.nu_star); }

  std::string describe() const {
    if (kind_ == Kind::gaussian) return "gaussian(" + std::to_string(mu_) + "," + std::to_string(sigma_) + ")";
    return "two_point(" + std::to_string(low_) + "," + std::to_string(high_) + "," + std::to_string(p_) + ")";
  }

 private:
  explicit DualOnlyProblem(Kind k) : kind_(k) {}

  Kind kind_;
  double mu_ = 0.0, sigma_ = 0.0;
  double low_ = 1.0, high_ = 1.0, p_ = 0.0;
  DistributionStats stats_{1.0, 0.0, 1.0, 0.0};
};

struct HardInstancePair {
  DualOnlyProblem p0;
  DualOnlyProblem p1;
  double h;
  double separation;        // |nu1* - nu0*|
  double separation_floor;  // (kappa - 1) / (32 sqrt(kappa T))
};

// Two laws on {eps, kappa} with p0 = 1/kappa and p1 = p0 + 1/(8 sqrt(kappa T)).
inline HardInstancePair hard_instance_pair(double kappa, std::uint64_t T, double eps = 1.0) {
  if (!(kappa >= 2.0)) throw std::invalid_argument("hard_instance_pair: kappa must be >= 2");
  if (T == 0 || static_cast<double>(T) < kappa) throw std::invalid_argument("hard_instance_pair: need T >= kappa");
  if (!(eps > 0.0) || !(eps <= kappa)) throw std::invalid_argument("hard_instance_pair: need 0 < eps <= kappa");
  const double Td = static_cast<double>(T);
  const double p0 = 1.0 / kappa;
  const double h = 1.0 / (8.0 * std::sqrt(kappa * Td));
  auto a = DualOnlyProblem::two_point(eps, kappa, p0);
  auto b = DualOnlyProblem::two_point(eps, kappa, p0 + h);
  const double sep = std::abs(b.stats().nu_star - a.stats().nu_star);
  return {a, b, h, sep, (kappa - 1.0) / (32.0 * std::sqrt(kappa * Td))};
}

}  // namespace scent
