#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "scent/errors.hpp"
#include "scent/rng.hpp"

namespace scent {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class LabelKind { classification, regression, sign };

inline std::string_view to_string(LabelKind k) {
  switch (k) {
    case LabelKind::classification: return "classification";
    case LabelKind::regression: return "regression";
    case LabelKind::sign: return "sign";
  }
  return "?";
}

inline LabelKind parse_label_kind(std::string_view s) {
  if (s == "classification") return LabelKind::classification;
  if (s == "regression") return LabelKind::regression;
  if (s == "sign") return LabelKind::sign;
  throw ConfigError("unknown label kind '" + std::string(s) + "'");
}

struct FeatureDataset {
  RowMatrix features;
  Eigen::VectorXd labels;
  LabelKind kind = LabelKind::regression;
  bool standardized = false;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  auto row(std::size_t i) const { return features.row(static_cast<Eigen::Index>(i)); }
};

// K centroids on the unit sphere; each row is a uniformly chosen centroid plus
// N(0, noise^2) per coordinate.
inline FeatureDataset synth_multiclass(std::size_t n, std::size_t d, std::size_t K, double noise,
                                       std::uint64_t seed) {
  if (K < 2) throw std::invalid_argument("synth_multiclass: K must be >= 2");
  if (n == 0 || d == 0) throw std::invalid_argument("synth_multiclass: empty shape");
  Rng rng(seed);
  RowMatrix centroids(K, d);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < d; ++j) centroids(k, j) = rng.normal();
    const double norm = centroids.row(k).norm();
    if (norm > 0.0) centroids.row(k) /= norm;
  }
  FeatureDataset out;
  out.kind = LabelKind::classification;
  out.features.resize(n, d);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = rng.index(K);
    out.labels(i) = static_cast<double>(y);
    for (std::size_t j = 0; j < d; ++j) out.features(i, j) = centroids(y, j) + noise * rng.normal();
  }
  return out;
}

// Positives around +shift u, negatives around -shift u for a random unit u.
// The first row is always positive and the second negative.
inline FeatureDataset synth_pauc(std::size_t n, std::size_t d, double pos_fraction, double shift,
                                 double noise, std::uint64_t seed) {
  if (n < 2 || d == 0) throw std::invalid_argument("synth_pauc: need n >= 2 and d >= 1");
  if (!(pos_fraction > 0.0 && pos_fraction < 1.0)) throw std::invalid_argument("synth_pauc: pos_fraction outside (0, 1)");
  Rng rng(seed);
  Eigen::VectorXd u(d);
  for (std::size_t j = 0; j < d; ++j) u(j) = rng.normal();
  u /= u.norm();
  FeatureDataset out;
  out.kind = LabelKind::sign;
  out.features.resize(n, d);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool positive = rng.uniform() < pos_fraction;
    if (i == 0) positive = true;
    if (i == 1) positive = false;
    out.labels(i) = positive ? 1.0 : -1.0;
    const double c = positive ? shift : -shift;
    for (std::size_t j = 0; j < d; ++j) out.features(i, j) = c * u(j) + noise * rng.normal();
  }
  return out;
}

// y = a'x + b + e with x ~ N(0, I), a ~ N(0, I / d), and noise e whose scale
// grows with |x_1| plus rare large outliers, so the squared residuals are
// heavy tailed.
inline FeatureDataset synth_regression(std::size_t n, std::size_t d, double noise, std::uint64_t seed) {
  if (n == 0 || d == 0) throw std::invalid_argument("synth_regression: empty shape");
  Rng rng(seed);
  Eigen::VectorXd a(d);
  for (std::size_t j = 0; j < d; ++j) a(j) = rng.normal() / std::sqrt(static_cast<double>(d));
  const double b = rng.normal();
  FeatureDataset out;
  out.kind = LabelKind::regression;
  out.features.resize(n, d);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) out.features(i, j) = rng.normal();
    double e = noise * (1.0 + 0.5 * std::abs(out.features(i, 0))) * rng.normal();
    if (rng.uniform() < 0.05) e += 3.0 * noise * rng.normal();
    out.labels(i) = out.features.row(i).dot(a) + b + e;
  }
  return out;
}

}  // namespace scent
