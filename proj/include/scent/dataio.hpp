#pragma once

// CSV datasets: a header line, then one row per datum with the label in
// column 0 and features in columns 1..d, comma separated. Floats are written
// as shortest round-trip decimals.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "scent/errors.hpp"
#include "scent/problems/dataset.hpp"

namespace scent {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view field, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("cannot parse '" + std::string(field) + "' as a number", line);
  }
  return v;
}

inline double parse_label(std::string_view field, LabelKind kind, std::size_t line) {
  const double v = parse_double(field, line);
  switch (kind) {
    case LabelKind::classification:
      if (!(v >= 0.0) || v != std::floor(v) || field.find_first_of(".eE") != std::string_view::npos) {
        throw ParseError("class label '" + std::string(field) + "' is not a nonnegative integer", line);
      }
      break;
    case LabelKind::sign:
      if (v != 1.0 && v != -1.0) throw ParseError("sign label '" + std::string(field) + "' is not +1 or -1", line);
      break;
    case LabelKind::regression:
      if (!std::isfinite(v)) throw ParseError("regression label is not finite", line);
      break;
  }
  return v;
}

}  // namespace detail

inline FeatureDataset parse_csv(std::istream& in, LabelKind kind) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header = false;
  std::vector<double> values;
  std::vector<double> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_commas(line);
    if (!header) {
      header = true;
      width = fields.size();
      if (width < 2) throw SchemaError("header must name a label column and at least one feature column");
      continue;
    }
    if (fields.size() != width) {
      throw SchemaError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(width));
    }
    labels.push_back(detail::parse_label(fields[0], kind, line_no));
    for (std::size_t j = 1; j < width; ++j) values.push_back(detail::parse_double(fields[j], line_no));
  }
  if (!header) throw SchemaError("empty file");
  if (labels.empty()) throw SchemaError("no data rows");
  FeatureDataset out;
  out.kind = kind;
  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto d = static_cast<Eigen::Index>(width - 1);
  out.features = Eigen::Map<const RowMatrix>(values.data(), n, d);
  out.labels = Eigen::Map<const Eigen::VectorXd>(labels.data(), n);
  return out;
}

inline FeatureDataset load_csv(const std::filesystem::path& path, LabelKind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in, kind);
}

inline void write_csv(std::ostream& out, const FeatureDataset& data) {
  out << "label";
  for (std::size_t j = 1; j <= data.dim(); ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out << format_double(data.labels(static_cast<Eigen::Index>(i)));
    for (std::size_t j = 0; j < data.dim(); ++j) out << ',' << format_double(data.features(i, j));
    out << '\n';
  }
}

// Writes to a sibling temporary and renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline void write_csv(const std::filesystem::path& path, const FeatureDataset& data) {
  std::ostringstream out;
  write_csv(out, data);
  write_file_atomic(path, out.str());
}

// Divides regression targets by their standard deviation; features untouched.
inline FeatureDataset normalize_targets(FeatureDataset data) {
  if (data.kind != LabelKind::regression || data.rows() < 2) return data;
  const double n = static_cast<double>(data.rows());
  const double mean = data.labels.mean();
  const double var = (data.labels.array() - mean).square().sum() / n;
  if (var > 1e-12) data.labels /= std::sqrt(var);
  return data;
}

// Zero-mean, unit-variance feature columns (population variance, floor 1e-12).
// With normalize_target, regression targets are divided by their standard
// deviation.
inline FeatureDataset standardize(FeatureDataset data, bool normalize_target = false) {
  if (data.rows() < 2) throw std::invalid_argument("standardize: need at least two rows");
  const double n = static_cast<double>(data.rows());
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    auto col = data.features.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double var = col.squaredNorm() / n;
    if (var > 1e-12) col /= std::sqrt(var);
  }
  if (normalize_target) data = normalize_targets(std::move(data));
  data.standardized = true;
  return data;
}

// argmin_{a, b} sum_j (a'x_j + b - y_j)^2 from the normal equations with a
// 1e-10 ridge. Returns (a, b) stacked with the intercept last.
inline Eigen::VectorXd least_squares_init(const FeatureDataset& data) {
  const auto n = static_cast<Eigen::Index>(data.rows());
  const auto d = static_cast<Eigen::Index>(data.dim());
  if (n == 0) throw std::invalid_argument("least_squares_init: empty dataset");
  Eigen::MatrixXd X(n, d + 1);
  X.leftCols(d) = data.features;
  X.col(d).setOnes();
  Eigen::MatrixXd A = X.transpose() * X;
  A.diagonal().array() += 1e-10;
  const Eigen::VectorXd rhs = X.transpose() * data.labels;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw NumericalError("least_squares_init: factorization failed");
  Eigen::VectorXd sol = ldlt.solve(rhs);
  if (!sol.allFinite()) throw NumericalError("least_squares_init: singular normal equations");
  return sol;
}

}  // namespace scent
