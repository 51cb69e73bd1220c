#pragma once

// Exact evaluators over the finite inner populations, the brute-force
// proximal solve, variance diagnostics, and the rate bounds.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/logexp.hpp"
#include "scent/problem.hpp"
#include "scent/problems/dual_only.hpp"
#include "scent/rng.hpp"

namespace scent {

// log mean_k e^{s_i(w; k)} over the whole inner population of anchor i.
template <CermProblem P>
double anchor_log_mean(const P& problem, std::size_t i, const Vector& w, std::vector<double>& buf) {
  const std::size_t K = problem.inner_size(i);
  buf.resize(K);
  for (std::size_t k = 0; k < K; ++k) buf[k] = problem.score(i, w, k);
  return logmeanexp(buf);
}

// F_CERM(w), unscaled.
template <CermProblem P>
double full_objective(const P& problem, const Vector& w) {
  std::vector<double> buf;
  double total = 0.0;
  for (std::size_t i = 0; i < problem.n_anchors(); ++i) total += anchor_log_mean(problem, i, w, buf);
  return total / static_cast<double>(problem.n_anchors());
}

// objective_scale() * F_CERM(w): tau-scaled for pAUC and KL-DRO.
template <CermProblem P>
double reported_objective(const P& problem, const Vector& w) {
  return problem.objective_scale() * full_objective(problem, w);
}

// (1/n) sum_i mean_k [e^{s_i(w;k) - nu_i} + nu_i]
template <CermProblem P>
double full_joint_objective(const P& problem, const Vector& w, const Vector& nu) {
  if (static_cast<std::size_t>(nu.size()) != problem.n_anchors()) throw std::invalid_argument("full_joint_objective: nu has wrong length");
  double total = 0.0;
  for (std::size_t i = 0; i < problem.n_anchors(); ++i) {
    const std::size_t K = problem.inner_size(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) acc += std::exp(problem.score(i, w, k) - nu(static_cast<Eigen::Index>(i)));
    total += acc / static_cast<double>(K) + nu(static_cast<Eigen::Index>(i));
  }
  return total / static_cast<double>(problem.n_anchors());
}

template <CermProblem P>
Vector dual_optimum(const P& problem, const Vector& w) {
  std::vector<double> buf;
  Vector nu(static_cast<Eigen::Index>(problem.n_anchors()));
  for (std::size_t i = 0; i < problem.n_anchors(); ++i) nu(static_cast<Eigen::Index>(i)) = anchor_log_mean(problem, i, w, buf);
  return nu;
}

// grad F_CERM(w) = (1/n) sum_i sum_k softmax_k(s_i) grad s_i(w; k)
template <CermProblem P>
Vector full_gradient(const P& problem, const Vector& w) {
  Vector grad = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  std::vector<double> buf;
  const double inv_n = 1.0 / static_cast<double>(problem.n_anchors());
  for (std::size_t i = 0; i < problem.n_anchors(); ++i) {
    const std::size_t K = problem.inner_size(i);
    const double lse = anchor_log_mean(problem, i, w, buf) + std::log(static_cast<double>(K));
    for (std::size_t k = 0; k < K; ++k) problem.add_score_gradient(i, w, k, inv_n * std::exp(buf[k] - lse), grad);
  }
  return grad;
}

// d/dw of the joint objective at fixed nu.
template <CermProblem P>
Vector joint_gradient_w(const P& problem, const Vector& w, const Vector& nu) {
  Vector grad = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  const double inv_n = 1.0 / static_cast<double>(problem.n_anchors());
  for (std::size_t i = 0; i < problem.n_anchors(); ++i) {
    const std::size_t K = problem.inner_size(i);
    const double nu_i = nu(static_cast<Eigen::Index>(i));
    for (std::size_t k = 0; k < K; ++k) {
      const double weight = inv_n * std::exp(problem.score(i, w, k) - nu_i) / static_cast<double>(K);
      problem.add_score_gradient(i, w, k, weight, grad);
    }
  }
  return grad;
}

// argmin_nu e^{s - nu} + nu + D(nu, nu_prev) / alpha by bisection on the
// first-order condition multiplied through by e^{nu - c}:
//   e^{nu-c} - e^{s-c} + (e^{nu-nu_prev-c} - e^{-c}) / alpha = 0,
// which is increasing in nu.
inline double prox_bruteforce(double nu_prev, double s_value, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(nu_prev) || !std::isfinite(s_value)) {
    throw std::invalid_argument("prox_bruteforce: need finite inputs and alpha > 0");
  }
  using L = long double;
  const L c = std::max(nu_prev, s_value);
  const L a = alpha;
  auto g = [&](L nu) {
    return std::exp(nu - c) - std::exp(static_cast<L>(s_value) - c) + (std::exp(nu - nu_prev - c) - std::exp(-c)) / a;
  };
  L lo = std::min(nu_prev, s_value) - 1.0L;
  L hi = std::max(nu_prev, s_value) + 1.0L;
  while (hi - lo > 1e-12L) {
    const L mid = 0.5L * (lo + hi);
    if (g(mid) > 0.0L) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

struct Diagnostics {
  double sigma_sq = 0.0;  // E || e^{s - nu} grad s ||^2
  double delta_sq = 0.0;  // E [ e^{-nu} (e^s - E e^s)^2 ]
  double sigma_sq_se = 0.0;
  double delta_sq_se = 0.0;
  std::size_t n_samples = 0;
};

// Monte Carlo estimates per anchor, averaged over anchors. E e^s is the exact
// population mean. Standard errors treat anchors as independent.
template <CermProblem P>
Diagnostics estimate_diagnostics(const P& problem, const Vector& w, const Vector& nu, std::size_t n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("estimate_diagnostics: need at least 100 samples");
  Rng rng(seed);
  std::vector<double> buf;
  Vector g(static_cast<Eigen::Index>(problem.dim()));
  const std::size_t n = problem.n_anchors();
  double sig = 0.0, sig_var = 0.0, del = 0.0, del_var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double log_m = anchor_log_mean(problem, i, w, buf);
    const double nu_i = nu(static_cast<Eigen::Index>(i));
    const std::size_t self[1] = {i};
    double s1 = 0.0, s2 = 0.0, d1 = 0.0, d2 = 0.0;
    for (std::size_t r = 0; r < n_samples; ++r) {
      const std::size_t k = problem.sample_inner(i, std::span<const std::size_t>(self), rng);
      const double s = problem.score(i, w, k);
      g.setZero();
      problem.add_score_gradient(i, w, k, std::exp(s - nu_i), g);
      const double a = g.squaredNorm();
      // e^{-nu} (e^s - m)^2 = e^{2 log m - nu} (e^{s - log m} - 1)^2
      const double dev = std::expm1(s - log_m);
      const double b = std::exp(2.0 * log_m - nu_i) * dev * dev;
      s1 += a;
      s2 += a * a;
      d1 += b;
      d2 += b * b;
    }
    const double N = static_cast<double>(n_samples);
    sig += s1 / N;
    del += d1 / N;
    sig_var += std::max(0.0, s2 / N - (s1 / N) * (s1 / N)) / N;
    del_var += std::max(0.0, d2 / N - (d1 / N) * (d1 / N)) / N;
  }
  const double nd = static_cast<double>(n);
  return {sig / nd, del / nd, std::sqrt(sig_var) / nd, std::sqrt(del_var) / nd, n_samples};
}

struct ConvergenceBound {
  double rho;
  double big_c;  // (1 + rho)(1 + c1 - c0)
  double kappa;
  double m;
  double var_z;

  static ConvergenceBound make(double rho, Bounds b, const DistributionStats& st) {
    if (!(rho > 0.0)) throw std::invalid_argument("ConvergenceBound: rho must be positive");
    if (b.lo > b.hi) throw std::invalid_argument("ConvergenceBound: c0 > c1");
    return {rho, (1.0 + rho) * (1.0 + b.hi - b.lo), st.kappa, st.m, st.var_z};
  }

  double nu_star() const { return std::log(m); }
};

// Time-averaged gap bound of constant-step SPMD:
//   4 sqrt(2) sqrt(C (kappa - 1)(1 - r0 + r0 log r0) / T) + (F(nu0) - F(nu*)) / T
inline double spmd_bound(const ConvergenceBound& b, double nu0, std::uint64_t T) {
  if (T == 0) throw std::invalid_argument("spmd_bound: T must be positive");
  const double Td = static_cast<double>(T);
  const double log_r0 = b.nu_star() - nu0;
  const double r0 = std::exp(log_r0);
  const double shape = std::max(0.0, 1.0 - r0 + r0 * log_r0);
  const double first = 4.0 * std::sqrt(2.0) * std::sqrt(b.big_c * (b.kappa - 1.0) * shape / Td);
  return first + dual_gap(nu0, b.nu_star()) / Td;
}

// The matching constant step sqrt(D(nu*, nu0) m / (2 C T Var z)).
inline double spmd_alpha(const ConvergenceBound& b, double nu0, std::uint64_t T) {
  if (T == 0) throw std::invalid_argument("spmd_alpha: T must be positive");
  if (!(b.var_z > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(bregman_exp(b.nu_star(), nu0) * b.m / (2.0 * b.big_c * static_cast<double>(T) * b.var_z));
}

// Projected SGD bound: sqrt(2) |nu0 - nu*| e^{nu* - c0} sqrt((kappa - 1) / T)
inline double sgd_bound(const DistributionStats& st, double c0, double nu0, std::uint64_t T) {
  if (T == 0) throw std::invalid_argument("sgd_bound: T must be positive");
  return std::sqrt(2.0) * std::abs(nu0 - st.nu_star) * std::exp(st.nu_star - c0) *
         std::sqrt((st.kappa - 1.0) / static_cast<double>(T));
}

// ERM-rate SPMD: 2 (kappa - 1) / T + exp(3 sigma^2 / 2 - T / (16 kappa))
inline double erm_gap_bound(const DistributionStats& st, double sigma_subg, std::uint64_t T) {
  if (T == 0) throw std::invalid_argument("erm_gap_bound: T must be positive");
  const double Td = static_cast<double>(T);
  return 2.0 * (st.kappa - 1.0) / Td + std::exp(1.5 * sigma_subg * sigma_subg - Td / (16.0 * st.kappa));
}

}  // namespace scent
