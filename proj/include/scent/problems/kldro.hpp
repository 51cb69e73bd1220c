#pragma once

// KL-regularized DRO least squares:
//
//     min_{a, b}  tau log( (1/N) sum_j exp((a'x_j + b - y_j)^2 / tau) )
//
// as CERM with a single anchor whose inner population is the data rows.
// w = (a, b) with the intercept last.

#include <cmath>
#include <optional>
#include <span>

#include "scent/dual_updates.hpp"
#include "scent/errors.hpp"
#include "scent/problem.hpp"
#include "scent/problems/dataset.hpp"
#include "scent/rng.hpp"

namespace scent {

class KldroProblem {
 public:
  KldroProblem(FeatureDataset data, double tau, std::optional<double> radius = std::nullopt)
      : data_(std::move(data)), tau_(tau), radius_(radius) {
    if (!(tau_ > 0.0)) throw ConfigError("kldro: tau must be positive");
    if (data_.rows() == 0) throw DataError("kldro: empty dataset");
    if (radius_ && !(*radius_ > 0.0)) throw ConfigError("kldro: radius must be positive");
    max_norm_ = data_.features.rowwise().norm().maxCoeff();
    max_abs_y_ = data_.labels.cwiseAbs().maxCoeff();
  }

  std::size_t n_anchors() const { return 1; }
  std::size_t dim() const { return data_.dim() + 1; }
  double tau() const { return tau_; }
  const FeatureDataset& data() const { return data_; }

  std::optional<Bounds> bounds() const {
    if (!radius_) return std::nullopt;
    const double r = *radius_ * std::sqrt(max_norm_ * max_norm_ + 1.0) + max_abs_y_;
    return Bounds{0.0, r * r / tau_};
  }
  std::optional<double> projection_radius() const { return radius_; }
  std::size_t inner_size(std::size_t) const { return data_.rows(); }
  double objective_scale() const { return tau_; }

  double residual(const Vector& w, std::size_t j) const {
    const auto d = static_cast<Eigen::Index>(data_.dim());
    return data_.row(j).dot(w.head(d)) + w(d) - data_.labels(static_cast<Eigen::Index>(j));
  }

  double score(std::size_t, const Vector& w, std::size_t j) const {
    const double r = residual(w, j);
    return r * r / tau_;
  }

  void add_score_gradient(std::size_t, const Vector& w, std::size_t j, double weight, Vector& grad) const {
    const auto d = static_cast<Eigen::Index>(data_.dim());
    const double c = weight * 2.0 * residual(w, j) / tau_;
    grad.head(d) += c * data_.row(j).transpose();
    grad(d) += c;
  }

  std::size_t sample_inner(std::size_t, std::span<const std::size_t>, Rng& rng) const { return rng.index(data_.rows()); }

 private:
  FeatureDataset data_;
  double tau_;
  std::optional<double> radius_;
  double max_norm_ = 0.0;
  double max_abs_y_ = 0.0;
};

}  // namespace scent
