#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "scent/dataio.hpp"
#include "scent/errors.hpp"
#include "scent/problems/dataset.hpp"

using namespace scent;

namespace {
FeatureDataset parse(const std::string& text, LabelKind kind) {
  std::istringstream in(text);
  return parse_csv(in, kind);
}
}  // namespace

TEST(Csv, RoundTrip) {
  const auto d = synth_regression(25, 3, 0.5, 1);
  std::ostringstream out;
  write_csv(out, d);
  const auto back = parse(out.str(), LabelKind::regression);
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);

  const auto path = std::filesystem::temp_directory_path() / "scent_roundtrip.csv";
  write_csv(path, d);
  EXPECT_EQ(load_csv(path, LabelKind::regression).labels, d.labels);
  std::filesystem::remove(path);
}

TEST(Csv, LabelKinds) {
  EXPECT_EQ(parse("y,a\n2,0.5\n0,1\n", LabelKind::classification).labels(0), 2.0);
  EXPECT_THROW(parse("y,a\n2.5,0.5\n", LabelKind::classification), ParseError);
  EXPECT_THROW(parse("y,a\n-1,0.5\n", LabelKind::classification), ParseError);
  EXPECT_EQ(parse("y,a\n-1,0.5\n+1,2\n", LabelKind::sign).labels(1), 1.0);
  EXPECT_THROW(parse("y,a\n0,0.5\n", LabelKind::sign), ParseError);
}

TEST(Csv, Malformed) {
  EXPECT_THROW(parse("", LabelKind::regression), SchemaError);
  EXPECT_THROW(parse("y,a\n", LabelKind::regression), SchemaError);
  EXPECT_THROW(parse("y\n1\n", LabelKind::regression), SchemaError);
  EXPECT_THROW(parse("y,a,b\n1,2\n", LabelKind::regression), SchemaError);
  EXPECT_THROW(parse("y,a\n1,abc\n", LabelKind::regression), ParseError);
  EXPECT_THROW(load_csv("/nonexistent/nowhere.csv", LabelKind::regression), IoError);
  try {
    parse("y,a\n1,2\n1,x\n", LabelKind::regression);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Standardize, MomentsAndIdempotence) {
  const auto d = standardize(synth_regression(200, 4, 0.5, 3));
  EXPECT_TRUE(d.standardized);
  for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
    EXPECT_NEAR(d.features.col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR(d.features.col(j).squaredNorm() / 200.0, 1.0, 1e-12);
  }
  const auto again = standardize(d);
  EXPECT_LT((again.features - d.features).cwiseAbs().maxCoeff(), 1e-12);
  const auto t = standardize(synth_regression(200, 4, 0.5, 3), true);
  const double mean = t.labels.mean();
  EXPECT_NEAR((t.labels.array() - mean).square().sum() / 200.0, 1.0, 1e-12);
  EXPECT_THROW(standardize(synth_regression(1, 2, 0.1, 1)), std::invalid_argument);
}

TEST(Standardize, ConstantColumnIsCentered) {
  auto d = synth_regression(10, 2, 0.1, 1);
  d.features.col(1).setConstant(3.0);
  const auto s = standardize(d);
  EXPECT_LT(s.features.col(1).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LeastSquares, ExactRecovery) {
  auto d = synth_regression(50, 3, 0.1, 2);
  Eigen::Vector3d a(0.5, -1.0, 2.0);
  const double b = 0.75;
  d.labels = d.features * a;
  d.labels.array() += b;
  const auto w = least_squares_init(d);
  EXPECT_NEAR(w(0), 0.5, 1e-8);
  EXPECT_NEAR(w(1), -1.0, 1e-8);
  EXPECT_NEAR(w(2), 2.0, 1e-8);
  EXPECT_NEAR(w(3), 0.75, 1e-8);
}

TEST(Format, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(x)), x);
}
