#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scent/dataio.hpp"
#include "scent/experiments/bench.hpp"
#include "scent/experiments/dro.hpp"
#include "scent/experiments/dual_sim.hpp"
#include "scent/experiments/metrics.hpp"
#include "scent/experiments/parallel.hpp"
#include "scent/experiments/settings.hpp"
#include "scent/problems/multiclass.hpp"

using namespace scent;

TEST(Settings, ParseAndOverride) {
  std::istringstream in("# comment\ndro.tau = 0.2\nscent.lr = 1e-3  # trailing\n\nrun.seeds = 1, 2,3\n");
  auto s = Settings::parse(in);
  EXPECT_DOUBLE_EQ(s.get_double("dro.tau", 1.0), 0.2);
  EXPECT_EQ(s.get_u64s("run.seeds", {}), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(s.scoped_double("scent", "lr", 0.0), 1e-3);
  EXPECT_DOUBLE_EQ(s.scoped_double("sox", "lr", 7.0), 7.0);
  Settings o;
  o.set("dro.tau", "5");
  o.set("optimizer.lr", "0.5");
  s.merge(o);
  EXPECT_DOUBLE_EQ(s.get_double("dro.tau", 1.0), 5.0);
  EXPECT_DOUBLE_EQ(s.scoped_double("sox", "lr", 7.0), 0.5);
  EXPECT_TRUE(s.get_bool("x.flag", true));
  s.set("x.flag", "off");
  EXPECT_FALSE(s.get_bool("x.flag", true));
}

TEST(Settings, Errors) {
  std::istringstream no_eq("dro.tau 0.2\n");
  EXPECT_THROW(Settings::parse(no_eq), ConfigError);
  std::istringstream no_section("tau = 0.2\n");
  EXPECT_THROW(Settings::parse(no_section), ConfigError);
  Settings s;
  s.set("dro.tau", "abc");
  EXPECT_THROW(s.get_double("dro.tau", 1.0), ConfigError);
  s.set("dro.bogus", "1");
  EXPECT_THROW(s.check_known({"dro.tau"}), ConfigError);
  EXPECT_NO_THROW(s.check_known({"dro.*"}));
  s.set("x.flag", "maybe");
  EXPECT_THROW(s.get_bool("x.flag", true), ConfigError);
  EXPECT_THROW(Settings::load("/nonexistent/x.cfg"), ConfigError);
}

TEST(Metrics, SummaryAndFiles) {
  std::vector<RunRecord> recs(3);
  for (std::size_t k = 0; k < 3; ++k) {
    recs[k].seed = k + 1;
    recs[k].config_id = "cfg";
    recs[k].add(0, 0.0, "objective", 2.0);
    recs[k].add(10, 0.1, "objective", static_cast<double>(k));
  }
  const auto rows = summarize(recs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].iteration, 0u);
  EXPECT_EQ(rows[0].std, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].mean, 1.0);
  EXPECT_DOUBLE_EQ(rows[1].std, 1.0);
  EXPECT_EQ(rows[1].count, 3u);

  const auto dir = std::filesystem::temp_directory_path() / "scent_metrics_test";
  std::filesystem::remove_all(dir);
  emit_metrics(recs, dir);
  emit_metrics(recs, dir);  // overwrites in place
  EXPECT_TRUE(std::filesystem::exists(dir / "cfg_2.csv"));
  std::ifstream in(dir / "summary.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "config_id,metric,iteration,mean,std,count");
  std::filesystem::remove_all(dir);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(DualSim, SmallGrid) {
  DualSimConfig c;
  c.mus = {-1.0};
  c.sigmas = {0.0, 0.5};
  c.spmd_log_alpha = {0.0};
  c.sgd_alpha = {1.0};
  c.steps = 2000;
  c.seeds = {1, 2};
  const auto r = run_dual_sim(c);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_LE(r.cells[0].spmd_final_sq_error, 1e-20);
  EXPECT_EQ(r.records.size(), 8u);
  EXPECT_NE(dual_sim_summary_csv(r).find("time_avg_ratio"), std::string::npos);
  c.sigmas = {-1.0};
  EXPECT_THROW(run_dual_sim(c), ConfigError);
}

TEST(Dro, LargeTauApproachesMeanSquaredError) {
  const auto data = standardize(synth_regression(200, 3, 0.5, 4));
  DroConfig c;
  c.tau = 1e6;
  c.methods = {DroMethodParams{Method::scent, 1e-4, 1e-3}};
  c.epochs = 2;
  c.batch = 20;
  const auto r = run_dro(data, c);
  const Vector w = least_squares_init(data);
  const KldroProblem p(data, 1.0);
  double mse = 0.0;
  for (std::size_t j = 0; j < data.rows(); ++j) mse += p.residual(w, j) * p.residual(w, j);
  mse /= static_cast<double>(data.rows());
  EXPECT_NEAR(r.initial_objective, mse, 1e-4 * mse);
  EXPECT_EQ(r.summaries.size(), 1u);
  EXPECT_TRUE(std::isfinite(r.summaries[0].mean));
}

TEST(Dro, ScentBeatsInitialObjective) {
  const auto data = standardize(synth_regression(500, 4, 0.5, 9));
  DroConfig c;
  c.tau = 1.0;
  c.methods = {DroMethodParams{Method::scent, 1e-3, std::exp(-2.0)}, DroMethodParams{Method::bsgd, 1e-3}};
  c.epochs = 20;
  c.batch = 50;
  c.seeds = {1, 2};
  const auto r = run_dro(data, c);
  for (const auto& s : r.summaries) {
    EXPECT_EQ(s.failures, 0u);
    EXPECT_LT(s.mean, r.initial_objective);
  }
  c.batch = 501;
  EXPECT_THROW(run_dro(data, c), ConfigError);
}

TEST(Dro, TunedTable) {
  const auto p = tuned_dro_params("california", 1.0, Method::scent);
  ASSERT_TRUE(p.has_value());
  EXPECT_DOUBLE_EQ(p->lr, 5e-6);
  EXPECT_NEAR(std::log(p->alpha), -4.0, 1e-12);
  EXPECT_FALSE(tuned_dro_params("california", 2.0, Method::scent).has_value());
  EXPECT_FALSE(tuned_dro_params("iris", 1.0, Method::scent).has_value());
}

TEST(Bench, SelectsGridPointAndRecordsCurves) {
  const MulticlassProblem p(synth_multiclass(300, 6, 8, 0.7, 3), 8);
  BenchConfig c;
  c.methods = {Method::scent, Method::sox};
  c.grids[Method::scent] = {{0.01, 0.3}, {1.0}};
  c.grids[Method::sox] = {{0.3}, {0.1, 0.9}};
  c.epochs = 4;
  c.batch_anchors = 30;
  c.seeds = {1, 2};
  const auto r = run_bench(p, c);
  EXPECT_EQ(r.grid.size(), 4u);
  EXPECT_EQ(r.best_for(Method::scent).lr, 0.3);
  EXPECT_EQ(r.records.size(), 4u);
  EXPECT_EQ(r.records[0].series("objective").size(), 5u);
  EXPECT_LT(r.best_for(Method::scent).mean_final, r.initial_objective);
  const auto csv = bench_summary_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  c.final_eval_only = true;
  EXPECT_EQ(run_bench(p, c).records[0].series("objective").size(), 2u);
  c.grids.erase(Method::sox);
  EXPECT_THROW(run_bench(p, c), ConfigError);
}

TEST(Bench, Grids) {
  const auto g = geomspace(1e-3, 1e1, 5);
  EXPECT_NEAR(g[1], 1e-2, 1e-15);
  EXPECT_NEAR(exp_of_linspace(3.0, 30.0, 10)[9], std::exp(30.0), 1e-2);
  EXPECT_EQ(xc_default_grids().at(Method::scent).params.size(), 10u);
}
