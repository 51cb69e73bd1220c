#pragma once

// The compositional entropic risk problem
//
//     F_CERM(w) = (1/n) sum_i log E_{zeta ~ P_i} exp(s_i(w; zeta))
//
// and the sampling contract shared by every optimizer. Every shipped problem
// has a finite inner population per anchor with uniform weights, so an inner
// sample zeta is an index into [0, inner_size(i)).

#include <Eigen/Core>

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/rng.hpp"

namespace scent {

using Vector = Eigen::VectorXd;

template <class P>
concept CermProblem = requires(const P& p, std::size_t i, std::size_t k, const Vector& w,
                               double weight, Vector& grad, std::span<const std::size_t> batch,
                               Rng& rng) {
  { p.n_anchors() } -> std::convertible_to<std::size_t>;
  { p.dim() } -> std::convertible_to<std::size_t>;
  // Range [c0, c1] of every score over W, when W is bounded.
  { p.bounds() } -> std::same_as<std::optional<Bounds>>;
  // Radius of the origin-centered ball W; nullopt means unbounded.
  { p.projection_radius() } -> std::same_as<std::optional<double>>;
  { p.inner_size(i) } -> std::convertible_to<std::size_t>;
  { p.score(i, w, k) } -> std::convertible_to<double>;
  // grad += weight * d s_i(w; k) / dw
  p.add_score_gradient(i, w, k, weight, grad);
  // Draws one inner sample for anchor i; batch holds the current anchor set.
  { p.sample_inner(i, batch, rng) } -> std::convertible_to<std::size_t>;
  // Reported objective is objective_scale() * F_CERM (tau for pAUC and DRO).
  { p.objective_scale() } -> std::convertible_to<double>;
};

// Euclidean projection onto {w : ||w|| <= radius}.
inline Vector project_primal(const Vector& w, std::optional<double> radius) {
  if (!radius) return w;
  const double norm = w.norm();
  if (norm <= *radius) return w;
  return w * (*radius / norm);
}

inline void project_primal_inplace(Vector& w, std::optional<double> radius) {
  if (!radius) return;
  const double norm = w.norm();
  if (norm > *radius) w *= *radius / norm;
}

struct BatchSample {
  std::vector<std::size_t> anchors;
  std::size_t inner_per_anchor = 1;
  std::vector<std::size_t> dual_inner;    // zeta, anchors.size() * inner_per_anchor
  std::vector<std::size_t> primal_inner;  // zeta', same layout

  std::span<const std::size_t> dual(std::size_t slot) const {
    return std::span(dual_inner).subspan(slot * inner_per_anchor, inner_per_anchor);
  }
  std::span<const std::size_t> primal(std::size_t slot) const {
    return std::span(primal_inner).subspan(slot * inner_per_anchor, inner_per_anchor);
  }
};

// Draws B distinct anchors, then for each anchor in order its dual samples
// followed by its primal samples. With reuse_inner the primal samples are the
// dual samples and no extra draws happen.
template <CermProblem P>
BatchSample sample_batch(const P& problem, std::size_t batch_size, Rng& rng,
                         std::size_t inner_per_anchor = 1, bool reuse_inner = false) {
  const std::size_t n = problem.n_anchors();
  if (batch_size == 0 || batch_size > n) throw std::invalid_argument("sample_batch: need 1 <= batch_size <= n_anchors");
  if (inner_per_anchor == 0) throw std::invalid_argument("sample_batch: inner_per_anchor must be positive");
  BatchSample out;
  out.inner_per_anchor = inner_per_anchor;
  out.anchors = rng.sample_without_replacement(n, batch_size);
  out.dual_inner.reserve(batch_size * inner_per_anchor);
  if (!reuse_inner) out.primal_inner.reserve(batch_size * inner_per_anchor);
  const std::span<const std::size_t> batch(out.anchors);
  for (std::size_t a : out.anchors) {
    for (std::size_t j = 0; j < inner_per_anchor; ++j) out.dual_inner.push_back(problem.sample_inner(a, batch, rng));
    if (!reuse_inner) {
      for (std::size_t j = 0; j < inner_per_anchor; ++j) out.primal_inner.push_back(problem.sample_inner(a, batch, rng));
    }
  }
  if (reuse_inner) out.primal_inner = out.dual_inner;
  return out;
}

}  // namespace scent
