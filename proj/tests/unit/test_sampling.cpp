#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "scent/problem.hpp"
#include "scent/problems/multiclass.hpp"
#include "scent/rng.hpp"

using namespace scent;

TEST(Rng, DeterministicStreams) {
  Rng a(17), b(17), c(18);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(Rng(17).next_u64(), c.next_u64());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}

TEST(Rng, RangesAndMoments) {
  Rng rng(3);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.index(7), 7u);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
  EXPECT_THROW(rng.index(0), std::invalid_argument);
}

TEST(Rng, WithoutReplacementIsDistinct) {
  Rng rng(11);
  for (std::size_t k : {std::size_t{1}, std::size_t{10}, std::size_t{64}, std::size_t{300}}) {
    auto v = rng.sample_without_replacement(300, k);
    std::set<std::size_t> s(v.begin(), v.end());
    EXPECT_EQ(s.size(), k);
    EXPECT_LT(*s.rbegin(), 300u);
  }
  EXPECT_THROW(rng.sample_without_replacement(3, 4), std::invalid_argument);
}

namespace {
MulticlassProblem toy(std::size_t n) { return MulticlassProblem(synth_multiclass(n, 3, 4, 0.5, 1), 4); }
}  // namespace

TEST(SampleBatch, FullBatchCoversEveryAnchor) {
  const auto p = toy(10);
  Rng rng(1);
  const auto b = sample_batch(p, 10, rng, 2);
  std::vector<std::size_t> a = b.anchors;
  std::sort(a.begin(), a.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a[i], i);
  EXPECT_EQ(b.dual_inner.size(), 20u);
  EXPECT_EQ(b.primal_inner.size(), 20u);
  for (std::size_t slot = 0; slot < 10; ++slot) {
    for (auto k : b.dual(slot)) EXPECT_LT(k, p.inner_size(b.anchors[slot]));
  }
}

TEST(SampleBatch, DeterministicAndReuse) {
  const auto p = toy(30);
  Rng r1(5), r2(5);
  const auto a = sample_batch(p, 8, r1, 3);
  const auto b = sample_batch(p, 8, r2, 3);
  EXPECT_EQ(a.anchors, b.anchors);
  EXPECT_EQ(a.dual_inner, b.dual_inner);
  EXPECT_EQ(a.primal_inner, b.primal_inner);

  Rng r3(5);
  const auto c = sample_batch(p, 8, r3, 3, true);
  EXPECT_EQ(c.primal_inner, c.dual_inner);
}

TEST(SampleBatch, SingleAnchorAndErrors) {
  const auto p = toy(1);
  Rng rng(2);
  const auto b = sample_batch(p, 1, rng);
  EXPECT_EQ(b.anchors, std::vector<std::size_t>{0});
  EXPECT_THROW(sample_batch(p, 2, rng), std::invalid_argument);
  EXPECT_THROW(sample_batch(p, 0, rng), std::invalid_argument);
  EXPECT_THROW(sample_batch(p, 1, rng, 0), std::invalid_argument);
}

TEST(Projection, Ball) {
  Vector w(2);
  w << 3.0, 4.0;
  const Vector p = project_primal(w, 1.0);
  EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  EXPECT_NEAR(p(0), 0.6, 1e-15);
  EXPECT_EQ(project_primal(w, std::nullopt), w);
  EXPECT_EQ(project_primal(w, 10.0), w);
  Vector x = w;
  project_primal_inplace(x, 2.5);
  EXPECT_NEAR(x.norm(), 2.5, 1e-14);
}
