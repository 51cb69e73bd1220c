#pragma once

// SPMD versus SGD on the scalar dual problem with Gaussian scores, over a
// (mu, sigma) grid. Both methods in a cell see the same score stream.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "scent/dataio.hpp"
#include "scent/errors.hpp"
#include "scent/experiments/parallel.hpp"
#include "scent/optimizers.hpp"
#include "scent/problems/dual_only.hpp"
#include "scent/run_record.hpp"

namespace scent {

struct DualSimConfig {
  std::vector<double> mus{-1.0, -10.0};
  std::vector<double> sigmas{0.1, 0.3, 1.0};
  // One entry per mu, or a single entry for all.
  std::vector<double> spmd_log_alpha{-6.0, 3.0};
  std::vector<double> sgd_alpha{1.0};
  std::uint64_t steps = 1'000'000;
  std::uint64_t record_every = 0;  // 0: steps / 100
  std::vector<std::uint64_t> seeds{1};
  bool nu_from_first_sample = true;
  double nu_init = 0.0;
  std::size_t threads = 1;

  void validate() const {
    if (mus.empty() || sigmas.empty()) throw ConfigError("dual_sim: mu and sigma grids must be nonempty");
    for (double s : sigmas) {
      if (!(s >= 0.0)) throw ConfigError("dual_sim: sigma must be nonnegative");
    }
    auto per_mu = [&](const std::vector<double>& v, const char* name) {
      if (v.size() != 1 && v.size() != mus.size()) {
        throw ConfigError(std::string("dual_sim: ") + name + " needs one value or one per mu");
      }
    };
    per_mu(spmd_log_alpha, "spmd log alpha");
    per_mu(sgd_alpha, "sgd alpha");
    for (double a : sgd_alpha) {
      if (!(a > 0.0)) throw ConfigError("dual_sim: sgd alpha must be positive");
    }
    if (steps == 0) throw ConfigError("dual_sim: steps must be positive");
    if (seeds.empty()) throw ConfigError("dual_sim: no seeds");
  }

  double spmd_log_alpha_for(std::size_t mu_index) const {
    return spmd_log_alpha.size() == 1 ? spmd_log_alpha[0] : spmd_log_alpha[mu_index];
  }
  double sgd_alpha_for(std::size_t mu_index) const { return sgd_alpha.size() == 1 ? sgd_alpha[0] : sgd_alpha[mu_index]; }
};

struct DualSimCell {
  double mu;
  double sigma;
  double spmd_time_avg_sq_error;  // mean over seeds
  double sgd_time_avg_sq_error;
  double spmd_final_sq_error;
  double sgd_final_sq_error;

  double time_avg_ratio() const { return spmd_time_avg_sq_error / sgd_time_avg_sq_error; }
  double final_ratio() const { return spmd_final_sq_error / sgd_final_sq_error; }
};

struct DualSimResult {
  std::vector<DualSimCell> cells;
  std::vector<RunRecord> records;
};

inline std::string dual_sim_config_id(Method method, double mu, double sigma) {
  return std::string(to_string(method)) + "_mu" + format_double(mu) + "_sigma" + format_double(sigma);
}

inline OptimizerConfig dual_sim_optimizer(const DualSimConfig& cfg, Method method, std::size_t mu_index, double mu,
                                          double sigma) {
  OptimizerConfig oc;
  oc.method = method;
  oc.total_steps = cfg.steps;
  oc.nu_from_first_batch = cfg.nu_from_first_sample;
  oc.nu_init_value = cfg.nu_init;
  oc.dual_clamp = false;
  oc.eval_every = cfg.record_every;
  oc.alpha_schedule = method == Method::dual_spmd ? StepSchedule::constant(std::exp(cfg.spmd_log_alpha_for(mu_index)))
                                                  : StepSchedule::constant(cfg.sgd_alpha_for(mu_index));
  oc.config_id = dual_sim_config_id(method, mu, sigma);
  return oc;
}

inline DualSimResult run_dual_sim(const DualSimConfig& cfg) {
  cfg.validate();
  struct Task {
    std::size_t mu_index, sigma_index, seed_index;
    Method method;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < cfg.mus.size(); ++a) {
    for (std::size_t b = 0; b < cfg.sigmas.size(); ++b) {
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        for (Method m : {Method::dual_spmd, Method::dual_sgd}) tasks.push_back({a, b, s, m});
      }
    }
  }
  for (const auto& t : tasks) {
    dual_sim_optimizer(cfg, t.method, t.mu_index, cfg.mus[t.mu_index], cfg.sigmas[t.sigma_index]).validate(1);
  }
  std::vector<RunRecord> records(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t k) {
    const auto& t = tasks[k];
    const double mu = cfg.mus[t.mu_index];
    const double sigma = cfg.sigmas[t.sigma_index];
    const auto problem = DualOnlyProblem::gaussian(mu, sigma);
    records[k] = dual_only_run(problem, dual_sim_optimizer(cfg, t.method, t.mu_index, mu, sigma), cfg.seeds[t.seed_index]);
  });

  DualSimResult out;
  const double ns = static_cast<double>(cfg.seeds.size());
  for (std::size_t a = 0; a < cfg.mus.size(); ++a) {
    for (std::size_t b = 0; b < cfg.sigmas.size(); ++b) {
      DualSimCell cell{cfg.mus[a], cfg.sigmas[b], 0.0, 0.0, 0.0, 0.0};
      for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (tasks[k].mu_index != a || tasks[k].sigma_index != b) continue;
        const double avg = *records[k].last("time_avg_sq_error") / ns;
        const double fin = *records[k].last("sq_error") / ns;
        if (tasks[k].method == Method::dual_spmd) {
          cell.spmd_time_avg_sq_error += avg;
          cell.spmd_final_sq_error += fin;
        } else {
          cell.sgd_time_avg_sq_error += avg;
          cell.sgd_final_sq_error += fin;
        }
      }
      out.cells.push_back(cell);
    }
  }
  out.records = std::move(records);
  return out;
}

inline std::string dual_sim_summary_csv(const DualSimResult& res) {
  std::ostringstream out;
  out << "mu,sigma,spmd_time_avg_sq_error,sgd_time_avg_sq_error,time_avg_ratio,spmd_final_sq_error,sgd_final_sq_error,final_ratio\n";
  for (const auto& c : res.cells) {
    out << format_double(c.mu) << ',' << format_double(c.sigma) << ',' << format_double(c.spmd_time_avg_sq_error) << ','
        << format_double(c.sgd_time_avg_sq_error) << ',' << format_double(c.time_avg_ratio()) << ','
        << format_double(c.spmd_final_sq_error) << ',' << format_double(c.sgd_final_sq_error) << ','
        << format_double(c.final_ratio()) << '\n';
  }
  return out.str();
}

}  // namespace scent
