#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "scent/errors.hpp"
#include "scent/optimizers.hpp"
#include "scent/problems/dataset.hpp"
#include "scent/problems/kldro.hpp"
#include "scent/problems/multiclass.hpp"
#include "scent/problems/pauc.hpp"

using namespace scent;

namespace {

MulticlassProblem bounded_mc() {
  return MulticlassProblem(synth_multiclass(60, 4, 5, 0.5, 21), 5, NegativeSampling::uniform, 2.0);
}

OptimizerConfig base(Method m, std::uint64_t steps) {
  OptimizerConfig c;
  c.method = m;
  c.eta_schedule = StepSchedule::constant(0.2);
  c.alpha_schedule = StepSchedule::constant(0.5);
  c.batch_anchors = 6;
  c.batch_inner = 2;
  c.total_steps = steps;
  return c;
}

template <class P>
Trainer<P> trained(const P& p, const OptimizerConfig& c, std::uint64_t seed) {
  Trainer<P> t(p, c, seed);
  while (t.step()) {
  }
  return t;
}

}  // namespace

TEST(Optimizers, ZeroLearningRateKeepsW) {
  const auto p = bounded_mc();
  Rng rng(4);
  Vector w0(static_cast<Eigen::Index>(p.dim()));
  for (Eigen::Index j = 0; j < w0.size(); ++j) w0(j) = 0.1 * rng.normal();
  auto c = base(Method::scent, 300);
  c.eta_schedule = StepSchedule::constant(0.0);
  c.alpha_schedule = StepSchedule::erm_rate();
  c.batch_anchors = p.n_anchors();
  Trainer<MulticlassProblem> t(p, c, 3, w0);
  while (t.step()) {
  }
  EXPECT_EQ(t.w(), w0);
  // e^{nu_i} is the running mean of 300 * 2 draws; nu tracks log m_i.
  const Vector star = dual_optimum(p, w0);
  EXPECT_LT((t.nu() - star).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Optimizers, ZeroDualRateFreezesNu) {
  const auto p = bounded_mc();
  auto c = base(Method::asgd, 50);
  c.alpha_schedule = StepSchedule::constant(0.0);
  c.nu_from_first_batch = false;
  c.nu_init_value = 0.25;
  const auto t = trained(p, c, 1);
  EXPECT_TRUE((t.nu().array() == 0.25).all());
  EXPECT_NE(t.w(), Vector::Zero(static_cast<Eigen::Index>(p.dim())));
}

TEST(Optimizers, SoftplusApproachesAsgdAsRhoVanishes) {
  const auto p = bounded_mc();
  auto a = base(Method::asgd, 100);
  auto s = a;
  s.method = Method::asgd_softplus;
  s.softplus_rho = 1e-8;
  const auto ta = trained(p, a, 7);
  const auto ts = trained(p, s, 7);
  EXPECT_LT((ta.w() - ts.w()).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LT((ta.nu() - ts.nu()).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Optimizers, UmaxWithInfiniteDeltaIsAsgd) {
  const auto p = bounded_mc();
  auto a = base(Method::asgd, 80);
  auto u = a;
  u.method = Method::umax;
  u.umax_delta = std::numeric_limits<double>::infinity();
  const auto ta = trained(p, a, 2);
  const auto tu = trained(p, u, 2);
  EXPECT_EQ(ta.w(), tu.w());
  EXPECT_EQ(ta.nu(), tu.nu());
}

TEST(Optimizers, UmaxZeroDeltaResetsToBatchLme) {
  const auto p = bounded_mc();
  auto u = base(Method::umax, 40);
  u.umax_delta = 0.0;
  auto s = base(Method::scent, 40);
  s.alpha_schedule = StepSchedule::infinite();
  const auto tu = trained(p, u, 5);
  const auto ts = trained(p, s, 5);
  EXPECT_LT((tu.w() - ts.w()).norm(), 1e-12);
}

TEST(Optimizers, SoxGammaOneIsInfiniteStepScent) {
  const auto p = bounded_mc();
  auto x = base(Method::sox, 60);
  x.sox_gamma = 1.0;
  auto s = base(Method::scent, 60);
  s.alpha_schedule = StepSchedule::infinite();
  const auto tx = trained(p, x, 9);
  const auto ts = trained(p, s, 9);
  EXPECT_EQ(tx.w(), ts.w());
  EXPECT_EQ(tx.nu(), ts.nu());
}

TEST(Optimizers, SoxMatchesScentWithSoxRate) {
  const auto p = bounded_mc();
  const double gp = 0.7;
  auto x = base(Method::sox, 200);
  x.sox_gamma = gp / (1.0 + gp);
  auto s = base(Method::scent, 200);
  s.alpha_schedule = StepSchedule::sox_rate(gp);
  const auto tx = trained(p, x, 4);
  const auto ts = trained(p, s, 4);
  EXPECT_LT((tx.w() - ts.w()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((tx.nu() - ts.nu()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Optimizers, SoxConstantScoresStayPut) {
  const auto p = bounded_mc();
  auto x = base(Method::sox, 30);
  x.sox_gamma = 0.5;
  x.eta_schedule = StepSchedule::constant(0.0);
  const auto t = trained(p, x, 1);  // w = 0: every score is 0
  EXPECT_LT(t.nu().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Optimizers, BsgdWithWholePopulationIsFullGradient) {
  const auto p = bounded_mc();
  Rng rng(6);
  Vector w(static_cast<Eigen::Index>(p.dim()));
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = 0.3 * rng.normal();
  BatchSample b;
  b.inner_per_anchor = p.classes();
  for (std::size_t i = 0; i < p.n_anchors(); ++i) {
    b.anchors.push_back(i);
    for (std::size_t k = 0; k < p.classes(); ++k) b.primal_inner.push_back(k);
  }
  b.dual_inner = b.primal_inner;
  const Vector g = primal_estimate(p, w, dual_optimum(p, w), b, Method::bsgd);
  EXPECT_LT((g - full_gradient(p, w)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Optimizers, EqualScoresGetEqualWeights) {
  // w = 0: every class has score 0, so both sampled classes weigh 1/2.
  const auto p = bounded_mc();
  const Vector w = Vector::Zero(static_cast<Eigen::Index>(p.dim()));
  BatchSample b;
  b.inner_per_anchor = 2;
  b.anchors = {0};
  b.primal_inner = {1, 3};
  b.dual_inner = b.primal_inner;
  Vector nu(static_cast<Eigen::Index>(p.n_anchors()));
  nu.setZero();
  Vector expect = Vector::Zero(w.size());
  p.add_score_gradient(0, w, 1, 0.5, expect);
  p.add_score_gradient(0, w, 3, 0.5, expect);
  EXPECT_LT((primal_estimate(p, w, nu, b, Method::bsgd) - expect).norm(), 1e-15);
}

TEST(Optimizers, SingleAnchorInfiniteStepWithReuseIsBsgd) {
  const KldroProblem p(synth_regression(40, 3, 0.5, 2), 4.0, 5.0);
  auto s = base(Method::scent, 100);
  s.batch_anchors = 1;
  s.batch_inner = 8;
  s.eta_schedule = StepSchedule::constant(0.05);
  s.alpha_schedule = StepSchedule::infinite();
  s.reuse_inner_sample = true;
  auto b = s;
  b.method = Method::bsgd;
  const auto ts = trained(p, s, 8);
  const auto tb = trained(p, b, 8);
  EXPECT_LT((ts.w() - tb.w()).norm(), 1e-12);
}

TEST(Optimizers, DeterministicRuns) {
  const auto p = bounded_mc();
  const auto c = base(Method::scent, 40);
  const auto a = run(p, c, 11);
  const auto b = run(p, c, 11);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) EXPECT_EQ(a.rows[r].value, b.rows[r].value);
  EXPECT_NE(run(p, c, 12).last("objective"), a.last("objective"));
  const auto obj = a.series("objective");
  EXPECT_EQ(obj.front().iteration, 0u);
  EXPECT_EQ(obj.back().iteration, 40u);
  for (std::size_t r = 1; r < obj.size(); ++r) EXPECT_GT(obj[r].iteration, obj[r - 1].iteration);
}

TEST(Optimizers, RhoMonitor) {
  const auto p = bounded_mc();
  auto c = base(Method::scent, 30);
  c.rho_monitor = 1e6;
  EXPECT_EQ(run(p, c, 1).last("rho_condition_held"), 1.0);
  c.alpha_schedule = StepSchedule::constant(1e9);
  EXPECT_EQ(run(p, c, 1).last("rho_condition_held"), 0.0);
}

TEST(Optimizers, ConfigValidation) {
  const auto p = bounded_mc();
  auto c = base(Method::scent, 10);
  c.eta_schedule = StepSchedule::constant(-1.0);
  EXPECT_THROW(run(p, c, 1), ConfigError);
  c = base(Method::scent, 10);
  c.batch_anchors = p.n_anchors() + 1;
  EXPECT_THROW(run(p, c, 1), ConfigError);
  c = base(Method::sox, 10);
  c.sox_gamma = 1.5;
  EXPECT_THROW(run(p, c, 1), ConfigError);
  c = base(Method::asgd, 10);
  c.alpha_schedule = StepSchedule::erm_rate();
  EXPECT_THROW(run(p, c, 1), ConfigError);
  c = base(Method::scent, 10);
  c.momentum = 1.0;
  EXPECT_THROW(run(p, c, 1), ConfigError);
  c = base(Method::scent, 0);
  EXPECT_THROW(run(p, c, 1), ConfigError);
  EXPECT_THROW(sox_run(p, base(Method::scent, 10), 1), ConfigError);
  EXPECT_THROW(parse_method("adam"), ConfigError);
  EXPECT_EQ(parse_method("umax"), Method::umax);
}

TEST(Optimizers, DivergenceRaisesNumericalError) {
  // Far from the optimum with a tiny tau, e^{s - nu} overflows in the
  // unclamped dual step.
  const KldroProblem p(synth_regression(30, 3, 0.5, 2), 1e-3);
  auto c = base(Method::asgd, 50);
  c.batch_anchors = 1;
  c.batch_inner = 4;
  const Vector w0 = Vector::Constant(4, 10.0);
  EXPECT_THROW(run(p, c, 1, w0), NumericalError);
}

TEST(Optimizers, MulticlassTrainingBeatsUniform) {
  const MulticlassProblem p(synth_multiclass(2000, 16, 20, 1.0, 42), 20, NegativeSampling::in_batch);
  OptimizerConfig c;
  c.method = Method::scent;
  c.eta_schedule = StepSchedule::constant(0.3);
  c.alpha_schedule = StepSchedule::constant(1.0);
  c.batch_anchors = 128;
  c.epochs = 20;
  c.eval_every = std::numeric_limits<std::uint64_t>::max();
  const auto t = trained(p, c, 1);
  EXPECT_LT(p.cross_entropy(t.w()), std::log(20.0) - 0.3);
}

TEST(DualOnly, NoiselessConvergesImmediately) {
  OptimizerConfig c;
  c.method = Method::dual_spmd;
  c.alpha_schedule = StepSchedule::constant(1.0);
  c.total_steps = 1000;
  const auto r = dual_only_solve(DualOnlyProblem::gaussian(0.3, 0.0), c, 1);
  EXPECT_LE(std::abs(r.nu_final - 0.3), 1e-10);
  c.nu_from_first_batch = false;
  c.nu_init_value = -2.0;
  const auto s = dual_only_solve(DualOnlyProblem::gaussian(0.3, 0.0), c, 1);
  EXPECT_LE(std::abs(s.nu_final - 0.3), 1e-10);
}

TEST(DualOnly, ErmRateGapIdentity) {
  const auto prob = DualOnlyProblem::two_point(1.0, 4.0, 0.3);
  OptimizerConfig c;
  c.method = Method::dual_spmd;
  c.alpha_schedule = StepSchedule::erm_rate();
  c.nu_from_first_batch = false;
  c.total_steps = 500;
  // Mirror the draws to track the running mean of z.
  Rng mirror(5);
  double sum_z = 0.0;
  double worst = 0.0;
  const double m = prob.stats().m;
  dual_only_solve(prob, c, 5, {}, [&](std::uint64_t t, double nu) {
    sum_z += std::exp(prob.sample_score(mirror));
    const double u = sum_z / static_cast<double>(t) / m - 1.0;
    const double g = 1.0 / (1.0 + u) + std::log1p(u) - 1.0;
    worst = std::max(worst, std::abs(prob.gap(nu) - g));
  });
  EXPECT_LT(worst, 1e-12);
}

TEST(DualOnly, ClampedSgdStaysInRange) {
  const auto prob = DualOnlyProblem::two_point(1.0, 4.0, 0.3);
  OptimizerConfig c;
  c.method = Method::dual_sgd;
  c.alpha_schedule = StepSchedule::constant(50.0);
  c.total_steps = 200;
  double lo = 1e9, hi = -1e9;
  dual_only_solve(prob, c, 2, {}, [&](std::uint64_t, double nu) {
    lo = std::min(lo, nu);
    hi = std::max(hi, nu);
  });
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, std::log(4.0));
  const auto rec = dual_only_run(prob, c, 2);
  EXPECT_TRUE(rec.last("time_avg_gap").has_value());
  EXPECT_EQ(rec.series("gap").size(), 100u);
}
