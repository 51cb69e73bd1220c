#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace scent {

// log(e^a + e^b) without overflow. Every exponential in the dual updates
// goes through this primitive.
inline double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// log(1 + e^x)
inline double softplus(double x) { return logaddexp(0.0, x); }

inline double logsumexp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("logsumexp of an empty range");
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// log((1/n) sum_j e^{x_j})
inline double logmeanexp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("logmeanexp of an empty range");
  return logsumexp(xs) - std::log(static_cast<double>(xs.size()));
}

}  // namespace scent
