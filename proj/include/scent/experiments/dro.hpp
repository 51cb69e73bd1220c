#pragma once

// KL-regularized DRO least squares: every method starts from the
// least-squares fit, trains with batch B over the single anchor's data rows,
// and reports tau * F_CERM each epoch.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scent/dataio.hpp"
#include "scent/errors.hpp"
#include "scent/experiments/parallel.hpp"
#include "scent/optimizers.hpp"
#include "scent/problems/kldro.hpp"
#include "scent/run_record.hpp"

namespace scent {

struct DroMethodParams {
  Method method = Method::scent;
  double lr = 1e-5;
  double alpha = 1.0;  // SPMD alpha (scent) or dual SGD alpha' (asgd family)
  double gamma = 0.5;  // sox
  double rho = 1e-3;   // asgd_softplus
  double delta = 1.0;  // umax
};

// Tuned values for California housing and abalone at tau in {0.2, 1, 5}.
inline std::optional<DroMethodParams> tuned_dro_params(const std::string& dataset, double tau, Method method) {
  struct Row {
    const char* dataset;
    double tau;
    Method method;
    double lr, alpha, gamma;
  };
  static const Row rows[] = {
      {"california", 0.2, Method::bsgd, 1e-5, 0, 0},
      {"california", 0.2, Method::asgd_softplus, 1e-6, 1e-6, 0},
      {"california", 0.2, Method::umax, 1e-5, 1.0, 0},
      {"california", 0.2, Method::sox, 5e-6, 0, 0.5},
      {"california", 0.2, Method::scent, 1e-5, std::exp(-22.0), 0},
      {"california", 1.0, Method::bsgd, 5e-6, 0, 0},
      {"california", 1.0, Method::asgd_softplus, 1e-6, 1e-6, 0},
      {"california", 1.0, Method::umax, 5e-6, 1.0, 0},
      {"california", 1.0, Method::sox, 5e-6, 0, 0.4},
      {"california", 1.0, Method::scent, 5e-6, std::exp(-4.0), 0},
      {"california", 5.0, Method::bsgd, 5e-6, 0, 0},
      {"california", 5.0, Method::asgd_softplus, 1e-5, 1e-5, 0},
      {"california", 5.0, Method::umax, 1e-4, 1.0, 0},
      {"california", 5.0, Method::sox, 1e-5, 0, 0.8},
      {"california", 5.0, Method::scent, 1e-5, std::exp(-1.1), 0},
      {"abalone", 0.2, Method::bsgd, 1e-5, 0, 0},
      {"abalone", 0.2, Method::asgd_softplus, 5e-5, 5e-5, 0},
      {"abalone", 0.2, Method::umax, 5e-5, 1.0, 0},
      {"abalone", 0.2, Method::sox, 5e-5, 0, 0.3},
      {"abalone", 0.2, Method::scent, 1e-4, std::exp(-38.0), 0},
      {"abalone", 1.0, Method::bsgd, 1e-5, 0, 0},
      {"abalone", 1.0, Method::asgd_softplus, 5e-5, 5e-5, 0},
      {"abalone", 1.0, Method::umax, 1e-4, 1.0, 0},
      {"abalone", 1.0, Method::sox, 1e-5, 0, 0.1},
      {"abalone", 1.0, Method::scent, 5e-5, std::exp(-10.0), 0},
      {"abalone", 5.0, Method::bsgd, 1e-4, 0, 0},
      {"abalone", 5.0, Method::asgd_softplus, 1e-4, 1e-4, 0},
      {"abalone", 5.0, Method::umax, 1e-4, 0.1, 0},
      {"abalone", 5.0, Method::sox, 1e-4, 0, 0.9},
      {"abalone", 5.0, Method::scent, 1e-4, std::exp(-4.0), 0},
  };
  for (const auto& r : rows) {
    if (dataset == r.dataset && std::abs(tau - r.tau) < 1e-12 && method == r.method) {
      DroMethodParams p;
      p.method = method;
      p.lr = r.lr;
      p.alpha = r.alpha;
      p.gamma = r.gamma;
      return p;
    }
  }
  return std::nullopt;
}

struct DroConfig {
  double tau = 1.0;
  std::vector<DroMethodParams> methods;
  std::uint64_t epochs = 300;
  std::size_t batch = 100;
  double momentum = 0.9;
  bool cosine = true;
  bool ls_init = true;
  bool reuse_inner_sample = true;  // primal step reuses the dual step's rows
  std::vector<std::uint64_t> seeds{1};
  std::string tag = "dro";
  std::size_t threads = 1;

  void validate(std::size_t rows) const {
    if (!(tau > 0.0)) throw ConfigError("dro: tau must be positive");
    if (methods.empty()) throw ConfigError("dro: no methods");
    if (seeds.empty()) throw ConfigError("dro: no seeds");
    if (batch == 0 || batch > rows) throw ConfigError("dro: batch must lie in [1, rows]");
    for (const auto& m : methods) {
      if (is_dual_only(m.method)) throw ConfigError("dro: " + std::string(to_string(m.method)) + " is a dual-only method");
    }
  }
};

inline std::string dro_config_id(const DroConfig& cfg, Method m) {
  return cfg.tag + "_" + std::string(to_string(m)) + "_tau" + format_double(cfg.tau);
}

inline OptimizerConfig dro_optimizer(const DroConfig& cfg, const DroMethodParams& p, std::size_t rows) {
  OptimizerConfig oc;
  oc.method = p.method;
  oc.batch_anchors = 1;
  oc.batch_inner = cfg.batch;
  oc.momentum = cfg.momentum;
  oc.epochs = cfg.epochs;
  oc.steps_per_epoch = (rows + cfg.batch - 1) / cfg.batch;
  oc.eta_schedule = cfg.cosine ? StepSchedule::cosine(p.lr, 0) : StepSchedule::constant(p.lr);
  oc.alpha_schedule = StepSchedule::constant(p.alpha);
  oc.sox_gamma = p.gamma;
  oc.softplus_rho = p.rho;
  oc.umax_delta = p.delta;
  oc.reuse_inner_sample = cfg.reuse_inner_sample;
  oc.config_id = dro_config_id(cfg, p.method);
  return oc;
}

struct DroMethodSummary {
  Method method;
  double mean;
  double std;
  std::size_t runs;
  std::size_t failures;  // runs stopped by a numerical error
};

struct DroResult {
  double initial_objective = 0.0;
  std::vector<DroMethodSummary> summaries;
  std::vector<RunRecord> records;
};

inline DroResult run_dro(const FeatureDataset& data, const DroConfig& cfg) {
  cfg.validate(data.rows());
  const KldroProblem problem(data, cfg.tau);
  for (const auto& p : cfg.methods) dro_optimizer(cfg, p, data.rows()).validate(1);
  const Vector w0 = cfg.ls_init ? least_squares_init(data) : Vector::Zero(static_cast<Eigen::Index>(data.dim() + 1));

  const std::size_t S = cfg.seeds.size();
  std::vector<RunRecord> records(cfg.methods.size() * S);
  std::vector<char> failed(records.size(), 0);
  parallel_for(records.size(), cfg.threads, [&](std::size_t k) {
    const auto& p = cfg.methods[k / S];
    const auto oc = dro_optimizer(cfg, p, data.rows());
    try {
      records[k] = run(problem, oc, cfg.seeds[k % S], w0);
    } catch (const NumericalError&) {
      records[k].seed = cfg.seeds[k % S];
      records[k].config_id = oc.config_id;
      records[k].add(0, 0.0, "diverged", 1.0);
      failed[k] = 1;
    }
  });

  DroResult out;
  out.initial_objective = reported_objective(problem, w0);
  for (std::size_t j = 0; j < cfg.methods.size(); ++j) {
    std::vector<double> finals;
    std::size_t failures = 0;
    for (std::size_t s = 0; s < S; ++s) {
      if (failed[j * S + s]) {
        ++failures;
        continue;
      }
      finals.push_back(*records[j * S + s].last("objective"));
    }
    double mean = std::nan(""), sd = 0.0;
    if (!finals.empty()) {
      mean = 0.0;
      for (double v : finals) mean += v;
      mean /= static_cast<double>(finals.size());
      double ss = 0.0;
      for (double v : finals) ss += (v - mean) * (v - mean);
      if (finals.size() > 1) sd = std::sqrt(ss / static_cast<double>(finals.size() - 1));
    }
    out.summaries.push_back({cfg.methods[j].method, mean, sd, finals.size(), failures});
  }
  out.records = std::move(records);
  return out;
}

inline std::string dro_summary_csv(const DroConfig& cfg, const DroResult& res) {
  std::ostringstream out;
  out << "method,tau,final_objective_mean,final_objective_std,runs,diverged,initial_objective\n";
  for (const auto& s : res.summaries) {
    out << to_string(s.method) << ',' << format_double(cfg.tau) << ',' << format_double(s.mean) << ','
        << format_double(s.std) << ',' << s.runs << ',' << s.failures << ',' << format_double(res.initial_objective) << '\n';
  }
  return out.str();
}

}  // namespace scent
