#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/errors.hpp"
#include "scent/logexp.hpp"
#include "scent/schedule.hpp"

using namespace scent;

TEST(LogExp, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(logaddexp(1000.0, 1000.0), 1000.0 + std::log(2.0));
  EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(softplus(800.0), 800.0);
  std::vector<double> xs{700.0, 701.0, 702.0};
  EXPECT_TRUE(std::isfinite(logsumexp(xs)));
  std::vector<double> same{3.0, 3.0, 3.0, 3.0};
  EXPECT_NEAR(logmeanexp(same), 3.0, 1e-14);
}

TEST(Bregman, KnownValues) {
  EXPECT_NEAR(bregman_exp(0.0, 1.0), 1.0 - 2.0 / std::exp(1.0), 1e-15);
  EXPECT_NEAR(bregman_exp(1.0, 0.0), 1.0 / std::exp(1.0), 1e-15);
  EXPECT_EQ(bregman_exp(2.5, 2.5), 0.0);
  EXPECT_GE(bregman_exp(1.0 + 1e-9, 1.0), 0.0);
}

TEST(SpmdStep, UnitAlpha) {
  EXPECT_NEAR(spmd_step(0.0, 1.0, StepSize::finite(1.0)), std::log((1.0 + std::exp(1.0)) / 2.0), 1e-14);
}

TEST(SpmdStep, LargeScoreStaysFinite) {
  const double nu = spmd_step(0.0, 700.0, StepSize::finite(1.0));
  EXPECT_TRUE(std::isfinite(nu));
  EXPECT_NEAR(nu, 700.0 - std::log(2.0), 1e-9);
  EXPECT_TRUE(std::isfinite(spmd_step(-900.0, 900.0, StepSize::from_log(-50.0))));
}

TEST(SpmdStep, InfiniteStepReturnsScore) {
  EXPECT_EQ(spmd_step(-3.0, 4.25, StepSize::infinite()), 4.25);
}

TEST(SpmdStep, FixedPointWhenScoreEqualsNu) {
  for (double a : {1e-6, 1.0, 1e6}) EXPECT_NEAR(spmd_step(2.0, 2.0, StepSize::finite(a)), 2.0, 1e-12);
}

TEST(SpmdStep, RejectsNonPositiveStep) {
  EXPECT_THROW(spmd_step(0.0, 0.0, StepSize::finite(0.0)), std::invalid_argument);
  EXPECT_THROW(spmd_step(0.0, 0.0, StepSize::finite(-1.0)), std::invalid_argument);
}

TEST(SpmdStep, BatchUsesMeanOfExponentials) {
  std::vector<double> s{0.0, std::log(3.0)};
  EXPECT_NEAR(spmd_step_batch(0.0, s, StepSize::infinite()), std::log(2.0), 1e-14);
  EXPECT_THROW(spmd_step_batch(0.0, std::vector<double>{}, StepSize::infinite()), std::invalid_argument);
}

TEST(DualSgd, UnclampedAndClamped) {
  EXPECT_NEAR(dual_sgd_step(0.0, std::log(2.0), 1.0, std::nullopt), 1.0, 1e-14);
  EXPECT_EQ(dual_sgd_step(0.0, 10.0, 1.0, Bounds{-1.0, 1.0}), 1.0);
  EXPECT_EQ(dual_sgd_step(0.0, -10.0, 5.0, Bounds{-1.0, 1.0}), -1.0);
  EXPECT_THROW(dual_sgd_step(0.0, 0.0, 0.0, std::nullopt), std::invalid_argument);
  EXPECT_THROW(dual_sgd_step(0.0, 0.0, 1.0, Bounds{1.0, -1.0}), std::invalid_argument);
}

TEST(Softplus, SurrogateValues) {
  EXPECT_NEAR(softplus_dual_value(0.0, 1.0), std::log(2.0), 1e-14);
  EXPECT_NEAR(softplus_dual_value(1.0, 1e-6), std::exp(1.0), 1e-5);
  EXPECT_LE(softplus_dual_weight(500.0, 0.01), 100.0);
  EXPECT_THROW(softplus_dual_value(0.0, 0.0), std::invalid_argument);
}

TEST(ErmRate, StateAndRunningMean) {
  EXPECT_TRUE(erm_rate_state(0.0, 1).is_infinite());
  EXPECT_NEAR(erm_rate_state(std::log(2.0), 2).value(), 0.5, 1e-15);
  EXPECT_THROW(erm_rate_state(0.0, 0), std::invalid_argument);

  double nu = spmd_step(0.0, std::log(2.0), erm_rate_state(0.0, 1));
  nu = spmd_step(nu, std::log(4.0), erm_rate_state(nu, 2));
  EXPECT_NEAR(nu, std::log(3.0), 1e-14);
}

TEST(Schedule, Values) {
  EXPECT_NEAR(schedule_alpha(StepSchedule::inv_sqrt_T(2.0, 100), 7).value(), 0.2, 1e-15);
  EXPECT_NEAR(schedule_alpha(StepSchedule::sox_rate(1.0), 3, 0.0).value(), 1.0, 1e-15);
  EXPECT_NEAR(schedule_alpha(StepSchedule::sox_rate(0.5), 3, std::log(2.0)).value(), 0.25, 1e-15);
  EXPECT_TRUE(schedule_alpha(StepSchedule::infinite(), 5).is_infinite());
  EXPECT_NEAR(schedule_eta(StepSchedule::constant(0.3), 1000), 0.3, 0.0);

  const auto c = StepSchedule::cosine(1.0, 10);
  EXPECT_NEAR(schedule_eta(c, 1), 1.0, 1e-15);
  EXPECT_GT(schedule_eta(c, 10), 0.0);
  EXPECT_LT(schedule_eta(c, 10), schedule_eta(c, 9));
  EXPECT_THROW(schedule_eta(StepSchedule::erm_rate(), 1), ConfigError);
}

TEST(Schedule, Validation) {
  EXPECT_THROW(validate_schedule(StepSchedule::constant(-1.0), "x"), ConfigError);
  EXPECT_THROW(validate_schedule(StepSchedule::constant(0.0), "x"), ConfigError);
  EXPECT_NO_THROW(validate_schedule(StepSchedule::constant(0.0), "x", true));
  EXPECT_THROW(validate_schedule(StepSchedule::sox_rate(0.0), "x"), ConfigError);
  EXPECT_THROW(validate_schedule(StepSchedule::cosine(1.0, 0), "x"), ConfigError);
  EXPECT_EQ(resolve_horizon(StepSchedule::cosine(1.0, 0), 50).horizon, 50u);
  EXPECT_EQ(parse_schedule_kind("erm_rate"), ScheduleKind::erm_rate);
  EXPECT_THROW(parse_schedule_kind("linear"), ConfigError);
}
