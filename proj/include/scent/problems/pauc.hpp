#pragma once

// One-way partial AUC with a KL-regularized top-negative weighting. Anchors
// are the positives; the inner population is the negatives, and
//
//     s_i(w; j) = l(w'(x_j - x_i)) / tau,   l(u) = max(0, margin + u)^2.
//
// The reported objective is tau * F_CERM.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/errors.hpp"
#include "scent/problem.hpp"
#include "scent/problems/dataset.hpp"
#include "scent/rng.hpp"

namespace scent {

class PaucProblem {
 public:
  PaucProblem(FeatureDataset data, double tau, double margin = 0.5, std::optional<double> radius = std::nullopt)
      : data_(std::move(data)), tau_(tau), margin_(margin), radius_(radius) {
    if (!(tau_ > 0.0)) throw ConfigError("pauc: tau must be positive");
    if (!(margin_ >= 0.0)) throw ConfigError("pauc: margin must be nonnegative");
    if (radius_ && !(*radius_ > 0.0)) throw ConfigError("pauc: radius must be positive");
    for (std::size_t i = 0; i < data_.rows(); ++i) {
      const double y = data_.labels(static_cast<Eigen::Index>(i));
      if (y == 1.0) {
        pos_.push_back(i);
      } else if (y == -1.0) {
        neg_.push_back(i);
      } else {
        throw DataError("pauc: label of row " + std::to_string(i) + " is not +1 or -1");
      }
    }
    if (pos_.empty() || neg_.empty()) throw DataError("pauc: need at least one positive and one negative row");
    max_norm_ = data_.features.rowwise().norm().maxCoeff();
  }

  std::size_t n_anchors() const { return pos_.size(); }
  std::size_t dim() const { return data_.dim(); }
  std::size_t n_negatives() const { return neg_.size(); }
  double tau() const { return tau_; }
  double margin() const { return margin_; }
  const FeatureDataset& data() const { return data_; }

  std::optional<Bounds> bounds() const {
    if (!radius_) return std::nullopt;
    const double top = margin_ + 2.0 * *radius_ * max_norm_;
    return Bounds{0.0, top * top / tau_};
  }
  std::optional<double> projection_radius() const { return radius_; }
  std::size_t inner_size(std::size_t) const { return neg_.size(); }
  double objective_scale() const { return tau_; }

  double score(std::size_t i, const Vector& w, std::size_t j) const {
    const double h = std::max(0.0, margin_ + margin_arg(i, w, j));
    return h * h / tau_;
  }

  void add_score_gradient(std::size_t i, const Vector& w, std::size_t j, double weight, Vector& grad) const {
    const double h = std::max(0.0, margin_ + margin_arg(i, w, j));
    if (h == 0.0) return;
    const double c = weight * 2.0 * h / tau_;
    grad += c * (data_.row(neg_[j]) - data_.row(pos_[i])).transpose();
  }

  std::size_t sample_inner(std::size_t, std::span<const std::size_t>, Rng& rng) const { return rng.index(neg_.size()); }

  // w'(x_j - x_i); the hinge is active when margin + this is positive.
  double margin_arg(std::size_t i, const Vector& w, std::size_t j) const {
    return data_.row(neg_[j]).dot(w) - data_.row(pos_[i]).dot(w);
  }

 private:
  FeatureDataset data_;
  double tau_;
  double margin_;
  std::optional<double> radius_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> neg_;
  double max_norm_ = 0.0;
};

}  // namespace scent
