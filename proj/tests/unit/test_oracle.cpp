#include <gtest/gtest.h>

#include <cmath>

#include "scent/oracle.hpp"
#include "scent/problems/dataset.hpp"
#include "scent/problems/dual_only.hpp"
#include "scent/problems/kldro.hpp"
#include "scent/problems/multiclass.hpp"
#include "scent/problems/pauc.hpp"

using namespace scent;

namespace {

Vector random_w(std::size_t dim, std::uint64_t seed, double scale = 0.5) {
  Rng rng(seed);
  Vector w(static_cast<Eigen::Index>(dim));
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = scale * rng.normal();
  return w;
}

}  // namespace

TEST(Oracle, JointAtOptimumIsObjectivePlusOne) {
  const MulticlassProblem mc(synth_multiclass(60, 4, 6, 0.5, 3), 6);
  const PaucProblem pa(synth_pauc(80, 4, 0.3, 1.0, 1.0, 3), 0.5);
  const KldroProblem kd(synth_regression(70, 3, 0.5, 3), 2.0);
  auto check = [](const auto& p, std::uint64_t seed) {
    const Vector w = random_w(p.dim(), seed);
    EXPECT_NEAR(full_joint_objective(p, w, dual_optimum(p, w)) - 1.0, full_objective(p, w), 1e-12);
    Vector off = dual_optimum(p, w).array() + 0.3;
    EXPECT_GT(full_joint_objective(p, w, off) - 1.0, full_objective(p, w));
  };
  check(mc, 1);
  check(pa, 2);
  check(kd, 3);
}

TEST(Oracle, GradientMatchesFiniteDifferences) {
  const MulticlassProblem mc(synth_multiclass(25, 3, 4, 0.5, 4), 4);
  const Vector w = random_w(mc.dim(), 7);
  const Vector g = full_gradient(mc, w);
  const double h = 1e-6;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    Vector a = w, b = w;
    a(j) += h;
    b(j) -= h;
    EXPECT_NEAR(g(j), (full_objective(mc, a) - full_objective(mc, b)) / (2 * h), 1e-7);
  }
  // At nu = nu*(w) the joint gradient in w is the objective gradient.
  EXPECT_LT((joint_gradient_w(mc, w, dual_optimum(mc, w)) - g).norm(), 1e-12);
}

TEST(Oracle, TwoPointDualOptimum) {
  // One anchor, inner population {0, log 3}: nu* = log 2.
  FeatureDataset d;
  d.features.resize(2, 1);
  d.features << 0.0, 1.0;
  d.labels.resize(2);
  d.labels << 0.0, 0.0;
  const double tau = 1.0;
  KldroProblem p(d, tau);
  Vector w(2);
  w << std::sqrt(std::log(3.0)), 0.0;  // residuals 0 and sqrt(log 3)
  EXPECT_NEAR(dual_optimum(p, w)(0), std::log(2.0), 1e-14);
}

TEST(Oracle, ProxBruteforceAgreesWithClosedForm) {
  Rng rng(12);
  for (int r = 0; r < 200; ++r) {
    const double nu = -10.0 + 20.0 * rng.uniform();
    const double s = -10.0 + 20.0 * rng.uniform();
    const double la = -5.0 + 10.0 * rng.uniform();
    EXPECT_NEAR(prox_bruteforce(nu, s, std::exp(la)), spmd_step(nu, s, StepSize::from_log(la)), 1e-9);
  }
}

TEST(Diagnostics, DeterministicInnerHasNoDelta) {
  // Single-row data: every inner draw is the same row.
  FeatureDataset d = synth_regression(1, 2, 0.1, 1);
  KldroProblem p(d, 1.0);
  const Vector w = random_w(p.dim(), 2);
  const auto diag = estimate_diagnostics(p, w, dual_optimum(p, w), 200, 5);
  EXPECT_NEAR(diag.delta_sq, 0.0, 1e-20);
  EXPECT_GT(diag.sigma_sq, 0.0);
  EXPECT_THROW(estimate_diagnostics(p, w, dual_optimum(p, w), 10, 5), std::invalid_argument);
}

TEST(Diagnostics, ZeroFeaturesHaveNoSigma) {
  FeatureDataset d = synth_multiclass(20, 3, 3, 0.5, 1);
  d.features.setZero();
  const MulticlassProblem p(d, 3);
  const Vector w = random_w(p.dim(), 3);
  const auto diag = estimate_diagnostics(p, w, dual_optimum(p, w), 100, 1);
  EXPECT_EQ(diag.sigma_sq, 0.0);
}

TEST(Bounds, SpmdBound) {
  const auto st = DualOnlyProblem::two_point(1.0, 4.0, 0.25).stats();
  const auto b = ConvergenceBound::make(1.0, Bounds{0.0, std::log(4.0)}, st);
  EXPECT_NEAR(spmd_bound(b, st.nu_star, 100), 0.0, 1e-15);
  EXPECT_GT(spmd_bound(b, st.nu_star + 1.0, 100), spmd_bound(b, st.nu_star + 1.0, 10000));
  // kappa = 1 removes the variance term.
  const auto flat = DualOnlyProblem::two_point(2.0, 2.0, 0.5).stats();
  const auto bf = ConvergenceBound::make(1.0, Bounds{std::log(2.0), std::log(2.0)}, flat);
  EXPECT_NEAR(spmd_bound(bf, 0.0, 10), dual_gap(0.0, flat.nu_star) / 10.0, 1e-15);
  EXPECT_TRUE(std::isinf(spmd_alpha(bf, 0.0, 10)));
  EXPECT_GT(spmd_alpha(b, 0.0, 100), 0.0);
  EXPECT_THROW(ConvergenceBound::make(0.0, Bounds{0.0, 1.0}, st), std::invalid_argument);
}

TEST(Bounds, SgdAndErmGap) {
  const auto st = DualOnlyProblem::two_point(1.0, 4.0, 0.25).stats();
  EXPECT_NEAR(sgd_bound(st, 0.0, 0.0, 400) * 2.0, sgd_bound(st, 0.0, 0.0, 100), 1e-14);
  EXPECT_NEAR(sgd_bound(st, -std::log(2.0), 0.0, 100), 2.0 * sgd_bound(st, 0.0, 0.0, 100), 1e-14);
  const auto flat = DualOnlyProblem::gaussian(0.0, 0.0).stats();
  EXPECT_EQ(sgd_bound(flat, 0.0, 1.0, 100), 0.0);
  EXPECT_NEAR(erm_gap_bound(flat, 0.0, 160), std::exp(-10.0), 1e-18);
  // For large T the polynomial term dominates.
  const double T = 1e7;
  EXPECT_NEAR(erm_gap_bound(st, 0.5, 10000000) * T / (2.0 * (st.kappa - 1.0)), 1.0, 1e-9);
}
