#pragma once

// Method comparison on one CERM problem with optional grid tuning. Each grid
// point is run on every seed; the point with the lowest mean final objective
// is kept per method.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scent/dataio.hpp"
#include "scent/errors.hpp"
#include "scent/experiments/parallel.hpp"
#include "scent/optimizers.hpp"
#include "scent/run_record.hpp"

namespace scent {

// `params` is the method's dual knob: alpha for scent, gamma for sox, the
// dual step alpha' for the asgd family; ignored by bsgd.
struct MethodGrid {
  std::vector<double> lrs;
  std::vector<double> params{0.0};
};

// n points from lo to hi, evenly spaced in log scale.
inline std::vector<double> geomspace(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n - 1);
    out[k] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  return out;
}

inline std::vector<double> exp_of_linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
    out[k] = std::exp(lo + f * (hi - lo));
  }
  return out;
}

// Extreme classification ranges: lr 1e-3..1e1, ASGD alpha' 1e-2..1e2,
// SOX gamma in (0, 1], SCENT log alpha 3..30.
inline std::map<Method, MethodGrid> xc_default_grids() {
  const auto lrs = geomspace(1e-3, 1e1, 5);
  return {
      {Method::scent, {lrs, exp_of_linspace(3.0, 30.0, 10)}},
      {Method::sox, {lrs, {0.01, 0.03, 0.1, 0.3, 1.0}}},
      {Method::asgd, {lrs, geomspace(1e-2, 1e2, 5)}},
      {Method::asgd_softplus, {lrs, geomspace(1e-2, 1e2, 5)}},
      {Method::umax, {lrs, geomspace(1e-2, 1e2, 5)}},
      {Method::bsgd, {lrs, {0.0}}},
  };
}

// Partial AUC ranges: lr 1e-5..1e-3, ASGD alpha' 1e-4..1e-1, SOX gamma
// 0.9..0.99, SCENT log alpha over the tuned values -15..-5.
inline std::map<Method, MethodGrid> pauc_default_grids() {
  const auto lrs = geomspace(1e-5, 1e-3, 5);
  return {
      {Method::scent, {lrs, exp_of_linspace(-15.0, -5.0, 5)}},
      {Method::sox, {lrs, {0.9, 0.95, 0.99}}},
      {Method::asgd, {lrs, geomspace(1e-4, 1e-1, 4)}},
      {Method::asgd_softplus, {lrs, geomspace(1e-4, 1e-1, 4)}},
      {Method::umax, {lrs, geomspace(1e-3, 1.0, 4)}},
      {Method::bsgd, {lrs, {0.0}}},
  };
}

struct BenchConfig {
  std::vector<Method> methods{Method::scent, Method::sox, Method::asgd};
  std::map<Method, MethodGrid> grids;
  std::uint64_t epochs = 20;
  std::size_t batch_anchors = 64;
  std::size_t batch_inner = 1;
  double momentum = 0.0;
  bool cosine = true;
  bool dual_clamp = true;
  double softplus_rho = 1e-3;
  double umax_delta = 1.0;
  bool final_eval_only = false;  // selected runs record only the start and end objective
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::string tag = "bench";
  std::size_t threads = 1;

  void validate(std::size_t n_anchors) const {
    if (methods.empty()) throw ConfigError("bench: no methods");
    if (seeds.empty()) throw ConfigError("bench: no seeds");
    for (Method m : methods) {
      if (is_dual_only(m)) throw ConfigError("bench: dual-only method " + std::string(to_string(m)));
      auto it = grids.find(m);
      if (it == grids.end() || it->second.lrs.empty() || it->second.params.empty()) {
        throw ConfigError("bench: no grid for " + std::string(to_string(m)));
      }
    }
    if (batch_anchors == 0 || batch_anchors > n_anchors) throw ConfigError("bench: batch_anchors must lie in [1, n]");
  }
};

inline OptimizerConfig bench_optimizer(const BenchConfig& cfg, Method m, double lr, double param,
                                       bool final_only = false) {
  OptimizerConfig oc;
  oc.method = m;
  oc.batch_anchors = cfg.batch_anchors;
  oc.batch_inner = cfg.batch_inner;
  oc.momentum = cfg.momentum;
  oc.epochs = cfg.epochs;
  oc.eta_schedule = cfg.cosine ? StepSchedule::cosine(lr, 0) : StepSchedule::constant(lr);
  oc.softplus_rho = cfg.softplus_rho;
  oc.umax_delta = cfg.umax_delta;
  oc.dual_clamp = cfg.dual_clamp;
  if (final_only) oc.eval_every = std::numeric_limits<std::uint64_t>::max();
  switch (m) {
    case Method::scent: oc.alpha_schedule = StepSchedule::constant(param); break;
    case Method::sox: oc.sox_gamma = param; break;
    case Method::asgd:
    case Method::asgd_softplus:
    case Method::umax:
      oc.alpha_schedule = cfg.cosine ? StepSchedule::cosine(param, 0) : StepSchedule::constant(param);
      break;
    default: break;
  }
  oc.config_id = cfg.tag + "_" + std::string(to_string(m));
  return oc;
}

struct BenchCandidate {
  Method method;
  double lr;
  double param;
  double mean_final;  // +inf when any seed diverged
};

struct BenchResult {
  std::vector<BenchCandidate> best;  // one per method, in config order
  std::vector<BenchCandidate> grid;  // every evaluated point
  std::vector<RunRecord> records;    // runs of the selected points
  double initial_objective = 0.0;

  const BenchCandidate& best_for(Method m) const {
    for (const auto& c : best) {
      if (c.method == m) return c;
    }
    throw std::out_of_range("no result for method");
  }
};

template <CermProblem P>
BenchResult run_bench(const P& problem, const BenchConfig& cfg, std::optional<Vector> w0 = std::nullopt) {
  cfg.validate(problem.n_anchors());
  struct Point {
    Method method;
    double lr, param;
  };
  std::vector<Point> points;
  for (Method m : cfg.methods) {
    const auto& g = cfg.grids.at(m);
    for (double lr : g.lrs) {
      for (double p : g.params) points.push_back({m, lr, p});
    }
  }
  for (const auto& p : points) bench_optimizer(cfg, p.method, p.lr, p.param).validate(problem.n_anchors());

  // Grid runs evaluate only at the end; evaluation draws no randomness, so the
  // selected points are re-run with the full cadence afterwards.
  const std::size_t S = cfg.seeds.size();
  std::vector<RunRecord> records(points.size() * S);
  std::vector<char> failed(records.size(), 0);
  parallel_for(records.size(), cfg.threads, [&](std::size_t k) {
    const auto& p = points[k / S];
    const auto oc = bench_optimizer(cfg, p.method, p.lr, p.param, true);
    try {
      records[k] = run(problem, oc, cfg.seeds[k % S], w0);
    } catch (const NumericalError&) {
      failed[k] = 1;
    }
  });

  BenchResult out;
  out.initial_objective = reported_objective(problem, w0 ? *w0 : Vector::Zero(static_cast<Eigen::Index>(problem.dim())));
  std::map<Method, std::size_t> best_index;
  for (std::size_t j = 0; j < points.size(); ++j) {
    double mean = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      if (failed[j * S + s]) {
        mean = std::numeric_limits<double>::infinity();
        break;
      }
      mean += *records[j * S + s].last("objective") / static_cast<double>(S);
    }
    if (!std::isfinite(mean)) mean = std::numeric_limits<double>::infinity();
    out.grid.push_back({points[j].method, points[j].lr, points[j].param, mean});
    auto it = best_index.find(points[j].method);
    if (it == best_index.end() || mean < out.grid[it->second].mean_final) best_index[points[j].method] = j;
  }
  std::vector<std::size_t> selected;
  for (Method m : cfg.methods) {
    const std::size_t j = best_index.at(m);
    out.best.push_back(out.grid[j]);
    for (std::size_t s = 0; s < S; ++s) {
      if (!failed[j * S + s]) selected.push_back(j * S + s);
    }
  }
  if (cfg.final_eval_only) {
    for (std::size_t k : selected) out.records.push_back(std::move(records[k]));
  } else {
    out.records.resize(selected.size());
    parallel_for(selected.size(), cfg.threads, [&](std::size_t q) {
      const std::size_t k = selected[q];
      const auto& p = points[k / S];
      out.records[q] = run(problem, bench_optimizer(cfg, p.method, p.lr, p.param), cfg.seeds[k % S], w0);
    });
  }
  return out;
}

inline std::string bench_summary_csv(const BenchResult& res) {
  std::ostringstream out;
  out << "method,lr,param,final_objective_mean,selected\n";
  for (const auto& c : res.grid) {
    bool selected = false;
    for (const auto& b : res.best) {
      selected = selected || (b.method == c.method && b.lr == c.lr && b.param == c.param);
    }
    out << to_string(c.method) << ',' << format_double(c.lr) << ',' << format_double(c.param) << ','
        << format_double(c.mean_final) << ',' << (selected ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace scent
