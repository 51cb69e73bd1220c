#pragma once

// Multiclass logistic regression as CERM. Anchor i is the datum (x_i, y_i);
// the inner sample is a class k and
//
//     s_i(w; k) = x_i' (w_k - w_{y_i}),
//
// so F_CERM(w) is the cross-entropy minus log K. w is the K x d weight matrix
// flattened row by row.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/errors.hpp"
#include "scent/problem.hpp"
#include "scent/problems/dataset.hpp"
#include "scent/rng.hpp"

namespace scent {

enum class NegativeSampling { uniform, in_batch };

class MulticlassProblem {
 public:
  MulticlassProblem(FeatureDataset data, std::size_t K, NegativeSampling negatives = NegativeSampling::uniform,
                    std::optional<double> radius = std::nullopt)
      : data_(std::move(data)), K_(K), negatives_(negatives), radius_(radius) {
    if (K_ < 2) throw ConfigError("multiclass: K must be >= 2");
    if (data_.rows() == 0) throw DataError("multiclass: empty dataset");
    if (radius_ && !(*radius_ > 0.0)) throw ConfigError("multiclass: radius must be positive");
    labels_.resize(data_.rows());
    for (std::size_t i = 0; i < data_.rows(); ++i) {
      const double y = data_.labels(static_cast<Eigen::Index>(i));
      if (!(y >= 0.0) || y != std::floor(y) || y >= static_cast<double>(K_)) {
        throw DataError("multiclass: label " + std::to_string(y) + " of row " + std::to_string(i) + " outside [0, K)");
      }
      labels_[i] = static_cast<std::size_t>(y);
    }
    max_norm_ = data_.features.rowwise().norm().maxCoeff();
  }

  std::size_t n_anchors() const { return data_.rows(); }
  std::size_t dim() const { return K_ * data_.dim(); }
  std::size_t classes() const { return K_; }
  const FeatureDataset& data() const { return data_; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  NegativeSampling negatives() const { return negatives_; }

  // |x'(w_k - w_y)| <= ||x|| (||w_k|| + ||w_y||) <= sqrt(2) ||x|| ||w||
  std::optional<Bounds> bounds() const {
    if (!radius_) return std::nullopt;
    const double c = std::sqrt(2.0) * *radius_ * max_norm_;
    return Bounds{-c, c};
  }
  std::optional<double> projection_radius() const { return radius_; }
  std::size_t inner_size(std::size_t) const { return K_; }
  double objective_scale() const { return 1.0; }

  double score(std::size_t i, const Vector& w, std::size_t k) const {
    const auto d = static_cast<Eigen::Index>(data_.dim());
    const auto x = data_.row(i);
    const auto y = static_cast<Eigen::Index>(labels_[i]);
    return x.dot(w.segment(static_cast<Eigen::Index>(k) * d, d)) - x.dot(w.segment(y * d, d));
  }

  void add_score_gradient(std::size_t i, const Vector&, std::size_t k, double weight, Vector& grad) const {
    const std::size_t y = labels_[i];
    if (k == y) return;
    const auto d = static_cast<Eigen::Index>(data_.dim());
    const auto x = data_.row(i).transpose();
    grad.segment(static_cast<Eigen::Index>(k) * d, d) += weight * x;
    grad.segment(static_cast<Eigen::Index>(y) * d, d) -= weight * x;
  }

  // In-batch mode draws the label of a uniformly chosen other anchor in the
  // batch; with a singleton batch it falls back to uniform over K.
  std::size_t sample_inner(std::size_t i, std::span<const std::size_t> batch, Rng& rng) const {
    if (negatives_ == NegativeSampling::uniform || batch.size() < 2) return rng.index(K_);
    std::size_t j = rng.index(batch.size() - 1);
    std::size_t self = batch.size();
    for (std::size_t a = 0; a < batch.size(); ++a) {
      if (batch[a] == i) {
        self = a;
        break;
      }
    }
    if (self < batch.size() && j >= self) ++j;
    if (self == batch.size()) j = rng.index(batch.size());
    return labels_[batch[j]];
  }

  // Mean cross-entropy of the softmax classifier, F_CERM + log K.
  double cross_entropy(const Vector& w) const {
    const auto d = static_cast<Eigen::Index>(data_.dim());
    const Eigen::Map<const RowMatrix> W(w.data(), static_cast<Eigen::Index>(K_), d);
    double total = 0.0;
    std::vector<double> logits(K_);
    for (std::size_t i = 0; i < data_.rows(); ++i) {
      const Eigen::VectorXd z = W * data_.row(i).transpose();
      for (std::size_t k = 0; k < K_; ++k) logits[k] = z(static_cast<Eigen::Index>(k));
      total += logsumexp(logits) - logits[labels_[i]];
    }
    return total / static_cast<double>(data_.rows());
  }

 private:
  FeatureDataset data_;
  std::size_t K_;
  NegativeSampling negatives_;
  std::optional<double> radius_;
  std::vector<std::size_t> labels_;
  double max_norm_ = 0.0;
};

}  // namespace scent
