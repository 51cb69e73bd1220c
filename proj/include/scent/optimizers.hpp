#pragma once

// Training loops for the joint problem min_{w, nu} F(w, nu) and for the
// scalar dual problem.
//
// One iteration of every joint method:
//   1. draw B distinct anchors and, per anchor, m dual samples and m primal
//      samples (shared when reuse_inner_sample is set);
//   2. update nu_i for the sampled anchors from the dual samples;
//   3. z = (c/B) sum_i (1/m) sum_j g_ij grad s_i(w; zeta'_ij), with
//      g_ij = e^{s - nu_i} (softplus derivative for asgd_softplus) and c the
//      problem's objective_scale(), so steps follow the reported objective;
//   4. v = beta v + z, w = Proj(w - eta_t v).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/errors.hpp"
#include "scent/logexp.hpp"
#include "scent/oracle.hpp"
#include "scent/problem.hpp"
#include "scent/problems/dual_only.hpp"
#include "scent/rng.hpp"
#include "scent/run_record.hpp"
#include "scent/schedule.hpp"

namespace scent {

enum class Method { scent, bsgd, asgd, asgd_softplus, umax, sox, dual_spmd, dual_sgd };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::scent: return "scent";
    case Method::bsgd: return "bsgd";
    case Method::asgd: return "asgd";
    case Method::asgd_softplus: return "asgd_softplus";
    case Method::umax: return "umax";
    case Method::sox: return "sox";
    case Method::dual_spmd: return "dual_spmd";
    case Method::dual_sgd: return "dual_sgd";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  for (auto m : {Method::scent, Method::bsgd, Method::asgd, Method::asgd_softplus, Method::umax, Method::sox,
                 Method::dual_spmd, Method::dual_sgd}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

inline bool is_dual_only(Method m) { return m == Method::dual_spmd || m == Method::dual_sgd; }
inline bool uses_dual_sgd(Method m) {
  return m == Method::asgd || m == Method::asgd_softplus || m == Method::umax || m == Method::dual_sgd;
}

struct OptimizerConfig {
  Method method = Method::scent;
  StepSchedule eta_schedule = StepSchedule::constant(0.1);
  // SPMD step alpha for scent and dual_spmd; SGD step alpha' for the
  // asgd family and dual_sgd. Unused by bsgd and sox.
  StepSchedule alpha_schedule = StepSchedule::constant(1.0);
  std::size_t batch_anchors = 1;
  std::size_t batch_inner = 1;
  double momentum = 0.0;
  std::uint64_t total_steps = 0;      // takes precedence over epochs
  std::uint64_t epochs = 0;
  std::uint64_t steps_per_epoch = 0;  // 0: ceil(n / B)
  double softplus_rho = 1e-3;
  double umax_delta = 1.0;            // 0 resets nu to the batch log-mean-exp every step
  double sox_gamma = 0.9;
  bool nu_from_first_batch = true;
  double nu_init_value = 0.0;
  bool reuse_inner_sample = false;
  bool dual_clamp = true;             // project dual SGD steps onto [c0, c1] when bounds are known
  std::uint64_t eval_every = 0;       // 0: once per epoch
  std::optional<double> rho_monitor;  // logs whether alpha_t <= rho min_i e^{-nu_i} held throughout
  std::string config_id = "run";

  std::uint64_t resolved_steps_per_epoch(std::size_t n_anchors) const {
    if (steps_per_epoch > 0) return steps_per_epoch;
    return (n_anchors + batch_anchors - 1) / std::max<std::size_t>(batch_anchors, 1);
  }

  std::uint64_t resolved_total(std::size_t n_anchors) const {
    if (total_steps > 0) return total_steps;
    return epochs * resolved_steps_per_epoch(n_anchors);
  }

  std::uint64_t resolved_eval_every(std::size_t n_anchors) const {
    if (eval_every > 0) return eval_every;
    if (is_dual_only(method)) return std::max<std::uint64_t>(1, resolved_total(n_anchors) / 100);
    return std::max<std::uint64_t>(1, resolved_steps_per_epoch(n_anchors));
  }

  // Throws ConfigError on the first inconsistency.
  void validate(std::size_t n_anchors) const {
    if (batch_anchors == 0) throw ConfigError("batch_anchors must be positive");
    if (batch_anchors > n_anchors) throw ConfigError("batch_anchors exceeds the number of anchors");
    if (batch_inner == 0) throw ConfigError("batch_inner must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
    if (resolved_total(n_anchors) == 0) throw ConfigError("total_steps or epochs must be positive");
    const std::uint64_t T = resolved_total(n_anchors);
    if (!is_dual_only(method)) {
      const auto eta = resolve_horizon(eta_schedule, T);
      if (eta.depends_on_nu() || eta.kind == ScheduleKind::infinite) {
        throw ConfigError("eta schedule must be constant, inv_sqrt_T or cosine");
      }
      validate_schedule(eta, "eta", true);
    }
    const auto alpha = resolve_horizon(alpha_schedule, T);
    switch (method) {
      case Method::scent:
      case Method::dual_spmd: validate_schedule(alpha, "alpha"); break;
      case Method::asgd:
      case Method::asgd_softplus:
      case Method::umax:
      case Method::dual_sgd:
        if (alpha.depends_on_nu() || alpha.kind == ScheduleKind::infinite) {
          throw ConfigError("alpha' schedule of " + std::string(to_string(method)) + " must be constant, inv_sqrt_T or cosine");
        }
        validate_schedule(alpha, "alpha'", method != Method::dual_sgd);
        break;
      default: break;
    }
    if (method == Method::asgd_softplus && !(softplus_rho > 0.0)) throw ConfigError("softplus_rho must be positive");
    if (method == Method::umax && !(umax_delta >= 0.0)) throw ConfigError("umax_delta must be nonnegative");
    if (method == Method::sox && !(sox_gamma > 0.0 && sox_gamma <= 1.0)) throw ConfigError("sox_gamma must lie in (0, 1]");
    if (!std::isfinite(nu_init_value)) throw ConfigError("nu_init must be finite");
    if (rho_monitor && !(*rho_monitor > 0.0)) throw ConfigError("rho_monitor must be positive");
  }
};

// Adds scale * sum_j g(s_j - nu_i) grad s_i(w; inner_j) to grad, where g is
// exp or, for asgd_softplus, the softplus weight.
template <CermProblem P>
void add_primal_term(const P& problem, const Vector& w, std::size_t i, std::span<const std::size_t> inner,
                     std::span<const double> scores, double nu_i, double scale, Method method, double rho, Vector& grad) {
  for (std::size_t j = 0; j < inner.size(); ++j) {
    const double x = scores[j] - nu_i;
    const double g = method == Method::asgd_softplus ? softplus_dual_weight(x, rho) : std::exp(x);
    problem.add_score_gradient(i, w, inner[j], scale * g, grad);
  }
}

// The primal estimator at frozen (w, nu) on the primal half of a batch.
template <CermProblem P>
Vector primal_estimate(const P& problem, const Vector& w, const Vector& nu, const BatchSample& batch,
                       Method method = Method::scent, double rho = 1e-3) {
  Vector grad = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  const std::size_t B = batch.anchors.size();
  const std::size_t m = batch.inner_per_anchor;
  const double scale = problem.objective_scale() / static_cast<double>(B * m);
  std::vector<double> s(m);
  for (std::size_t slot = 0; slot < B; ++slot) {
    const std::size_t i = batch.anchors[slot];
    const auto primal = batch.primal(slot);
    for (std::size_t j = 0; j < m; ++j) s[j] = problem.score(i, w, primal[j]);
    add_primal_term(problem, w, i, primal, s, nu(static_cast<Eigen::Index>(i)), scale, method, rho, grad);
  }
  return grad;
}

template <CermProblem P>
class Trainer {
 public:
  Trainer(const P& problem, OptimizerConfig cfg, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt)
      : problem_(problem), cfg_(std::move(cfg)), rng_(seed) {
    if (is_dual_only(cfg_.method)) throw ConfigError("dual-only methods run through dual_only_run");
    cfg_.validate(problem_.n_anchors());
    total_ = cfg_.resolved_total(problem_.n_anchors());
    cfg_.eta_schedule = resolve_horizon(cfg_.eta_schedule, total_);
    cfg_.alpha_schedule = resolve_horizon(cfg_.alpha_schedule, total_);
    const auto d = static_cast<Eigen::Index>(problem_.dim());
    w_ = w0 ? *w0 : Vector::Zero(d);
    if (w_.size() != d) throw ConfigError("initial w has the wrong dimension");
    project_primal_inplace(w_, problem_.projection_radius());
    v_ = Vector::Zero(d);
    grad_ = Vector::Zero(d);
    const std::size_t n = problem_.n_anchors();
    nu_ = Vector::Constant(static_cast<Eigen::Index>(n), cfg_.nu_init_value);
    counts_.assign(n, 0);
    if (cfg_.nu_from_first_batch) init_nu_from_batch(seed);
  }

  // One iteration; returns false once the configured horizon is reached.
  bool step() {
    if (t_ >= total_) return false;
    ++t_;
    const auto batch = sample_batch(problem_, cfg_.batch_anchors, rng_, cfg_.batch_inner,
                                    cfg_.reuse_inner_sample || cfg_.method == Method::bsgd);
    const std::size_t B = batch.anchors.size();
    const std::size_t m = cfg_.batch_inner;
    const double eta = schedule_eta(cfg_.eta_schedule, t_);
    const double inv = problem_.objective_scale() / static_cast<double>(B * m);
    grad_.setZero();
    s_dual_.resize(m);
    s_primal_.resize(m);
    for (std::size_t slot = 0; slot < B; ++slot) {
      const std::size_t i = batch.anchors[slot];
      const auto ii = static_cast<Eigen::Index>(i);
      const auto dual = batch.dual(slot);
      const auto primal = batch.primal(slot);
      for (std::size_t j = 0; j < m; ++j) s_dual_[j] = problem_.score(i, w_, dual[j]);
      for (std::size_t j = 0; j < m; ++j) s_primal_[j] = problem_.score(i, w_, primal[j]);
      nu_(ii) = dual_update(i, nu_(ii));
      ++counts_[i];
      add_primal_term(problem_, w_, i, primal, s_primal_, nu_(ii), inv, cfg_.method, cfg_.softplus_rho, grad_);
    }
    if (!grad_.allFinite()) throw NumericalError("non-finite primal gradient at step " + std::to_string(t_));
    if (cfg_.momentum > 0.0) {
      v_ = cfg_.momentum * v_ + grad_;
      w_ -= eta * v_;
    } else {
      w_ -= eta * grad_;
    }
    project_primal_inplace(w_, problem_.projection_radius());
    if (!w_.allFinite()) throw NumericalError("non-finite w at step " + std::to_string(t_));
    return true;
  }

  std::uint64_t t() const { return t_; }
  std::uint64_t total_steps() const { return total_; }
  const Vector& w() const { return w_; }
  const Vector& nu() const { return nu_; }
  const Vector& last_gradient() const { return grad_; }
  const OptimizerConfig& config() const { return cfg_; }
  const P& problem() const { return problem_; }
  void set_w(const Vector& w) { w_ = w; }
  void set_nu(const Vector& nu) { nu_ = nu; }
  bool rho_condition_held() const { return rho_ok_; }
  // max over steps and sampled anchors of alpha_t e^{nu_{i,t-1}}
  double max_alpha_ratio() const { return max_ratio_; }

 private:
  void init_nu_from_batch(std::uint64_t seed) {
    Rng init(derive_seed(seed, 1));
    std::vector<double> s(cfg_.batch_inner);
    for (std::size_t i = 0; i < problem_.n_anchors(); ++i) {
      const std::size_t self[1] = {i};
      for (auto& v : s) v = problem_.score(i, w_, problem_.sample_inner(i, std::span<const std::size_t>(self), init));
      nu_(static_cast<Eigen::Index>(i)) = logmeanexp(s);
    }
  }

  double dual_update(std::size_t i, double nu_prev) {
    const std::span<const double> sd(s_dual_);
    switch (cfg_.method) {
      case Method::scent: {
        const std::uint64_t t = cfg_.alpha_schedule.kind == ScheduleKind::erm_rate ? counts_[i] + 1 : t_;
        const StepSize alpha = schedule_alpha(cfg_.alpha_schedule, t, nu_prev);
        if (!alpha.is_infinite()) {
          const double ratio = std::exp(alpha.log_value() + nu_prev);
          max_ratio_ = std::max(max_ratio_, ratio);
          if (cfg_.rho_monitor && ratio > *cfg_.rho_monitor) rho_ok_ = false;
        } else if (cfg_.rho_monitor) {
          rho_ok_ = false;
        }
        return checked(spmd_step_batch(nu_prev, sd, alpha));
      }
      case Method::bsgd: return checked(logmeanexp(std::span<const double>(s_primal_)));
      case Method::sox: {
        const double lme = logmeanexp(sd);
        if (cfg_.sox_gamma == 1.0) return checked(lme);
        return checked(logaddexp(std::log1p(-cfg_.sox_gamma) + nu_prev, std::log(cfg_.sox_gamma) + lme));
      }
      case Method::asgd:
      case Method::asgd_softplus:
      case Method::umax: {
        const double alpha_prime = schedule_eta(cfg_.alpha_schedule, t_);
        double next = nu_prev;
        const auto clamp = cfg_.dual_clamp ? problem_.bounds() : std::nullopt;
        if (alpha_prime > 0.0) {
          if (cfg_.method == Method::asgd_softplus) {
            next = softplus_dual_sgd_step(nu_prev, sd, alpha_prime, cfg_.softplus_rho, clamp);
          } else {
            next = dual_sgd_step(nu_prev, logmeanexp(sd), alpha_prime, clamp);
          }
        }
        if (cfg_.method == Method::umax) {
          const double lme = logmeanexp(sd);
          if (cfg_.umax_delta == 0.0 || lme > next + cfg_.umax_delta) next = lme;
        }
        return checked(next);
      }
      default: break;
    }
    throw std::logic_error("dual_update: unsupported method");
  }

  double checked(double nu) const {
    if (!std::isfinite(nu)) throw NumericalError("non-finite dual variable at step " + std::to_string(t_));
    return nu;
  }

  const P& problem_;
  OptimizerConfig cfg_;
  Rng rng_;
  std::uint64_t total_ = 0;
  std::uint64_t t_ = 0;
  Vector w_, v_, grad_, nu_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> s_dual_, s_primal_;
  bool rho_ok_ = true;
  double max_ratio_ = 0.0;
};

// Called after each evaluation point with the trainer and the record.
template <CermProblem P>
using EvalHook = std::function<void(const Trainer<P>&, RunRecord&, double wall)>;

// Full loop: records "objective" (objective_scale * F_CERM) at step 0, every
// eval_every steps, and at the end.
template <CermProblem P>
RunRecord run(const P& problem, const OptimizerConfig& cfg, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt,
              EvalHook<P> hook = nullptr) {
  Stopwatch clock;
  Trainer<P> trainer(problem, cfg, seed, std::move(w0));
  RunRecord rec;
  rec.seed = seed;
  rec.config_id = cfg.config_id;
  const std::uint64_t every = cfg.resolved_eval_every(problem.n_anchors());
  auto evaluate = [&] {
    const double wall = clock.seconds();
    rec.add(trainer.t(), wall, "objective", reported_objective(problem, trainer.w()));
    if (hook) hook(trainer, rec, wall);
  };
  evaluate();
  while (trainer.step()) {
    if (trainer.t() % every == 0 || trainer.t() == trainer.total_steps()) evaluate();
  }
  if (cfg.method == Method::scent && cfg.rho_monitor) {
    rec.add(trainer.t(), clock.seconds(), "rho_condition_held", trainer.rho_condition_held() ? 1.0 : 0.0);
  }
  return rec;
}

namespace detail {
template <CermProblem P>
RunRecord run_checked(const P& problem, OptimizerConfig cfg, std::uint64_t seed, std::optional<Vector> w0,
                      std::initializer_list<Method> allowed, const char* name) {
  if (std::find(allowed.begin(), allowed.end(), cfg.method) == allowed.end()) {
    throw ConfigError(std::string(name) + ": method " + std::string(to_string(cfg.method)) + " not accepted");
  }
  return run(problem, cfg, seed, std::move(w0));
}
}  // namespace detail

template <CermProblem P>
RunRecord scent_run(const P& p, const OptimizerConfig& c, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt) {
  return detail::run_checked(p, c, seed, std::move(w0), {Method::scent}, "scent_run");
}
template <CermProblem P>
RunRecord bsgd_run(const P& p, const OptimizerConfig& c, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt) {
  return detail::run_checked(p, c, seed, std::move(w0), {Method::bsgd}, "bsgd_run");
}
template <CermProblem P>
RunRecord asgd_run(const P& p, const OptimizerConfig& c, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt) {
  return detail::run_checked(p, c, seed, std::move(w0), {Method::asgd, Method::asgd_softplus}, "asgd_run");
}
template <CermProblem P>
RunRecord umax_run(const P& p, const OptimizerConfig& c, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt) {
  return detail::run_checked(p, c, seed, std::move(w0), {Method::umax}, "umax_run");
}
template <CermProblem P>
RunRecord sox_run(const P& p, const OptimizerConfig& c, std::uint64_t seed, std::optional<Vector> w0 = std::nullopt) {
  return detail::run_checked(p, c, seed, std::move(w0), {Method::sox}, "sox_run");
}

// ---- scalar dual problem ----

struct DualCheckpoint {
  std::uint64_t t;
  double nu;
  double gap;
  double time_avg_gap;
  double time_avg_sq_error;
};

struct DualOnlyResult {
  double nu0 = 0.0;
  double nu_final = 0.0;
  double final_gap = 0.0;
  double time_avg_gap = 0.0;
  double time_avg_sq_error = 0.0;
  std::vector<DualCheckpoint> checkpoints;
};

// Iterates the scalar update on i.i.d. scores. With nu_from_first_batch the
// start is the log-mean-exp of batch_inner scores from a separate stream.
// The visitor, if given, sees (t, nu_t) after every step.
inline DualOnlyResult dual_only_solve(const DualOnlyProblem& problem, OptimizerConfig cfg, std::uint64_t seed,
                                      std::span<const std::uint64_t> checkpoints = {},
                                      const std::function<void(std::uint64_t, double)>& visit = nullptr) {
  if (!is_dual_only(cfg.method)) throw ConfigError("dual_only_run needs method dual_spmd or dual_sgd");
  cfg.validate(1);
  const std::uint64_t T = cfg.resolved_total(1);
  cfg.alpha_schedule = resolve_horizon(cfg.alpha_schedule, T);
  const std::size_t m = cfg.batch_inner;
  std::vector<double> s(m);
  Rng rng(seed);
  double nu = cfg.nu_init_value;
  if (cfg.nu_from_first_batch) {
    Rng init(derive_seed(seed, 1));
    for (auto& v : s) v = problem.sample_score(init);
    nu = logmeanexp(s);
  }
  const double nu_star = problem.stats().nu_star;
  const auto clamp = cfg.dual_clamp ? problem.bounds() : std::nullopt;
  DualOnlyResult out;
  out.nu0 = nu;
  double sum_gap = 0.0, sum_sq = 0.0;
  std::size_t next_cp = 0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    for (auto& v : s) v = problem.sample_score(rng);
    if (cfg.method == Method::dual_spmd) {
      nu = spmd_step_batch(nu, s, schedule_alpha(cfg.alpha_schedule, t, nu));
    } else {
      nu = dual_sgd_step(nu, logmeanexp(s), schedule_eta(cfg.alpha_schedule, t), clamp);
    }
    if (!std::isfinite(nu)) throw NumericalError("non-finite dual iterate at step " + std::to_string(t));
    const double gap = problem.gap(nu);
    const double err = nu - nu_star;
    sum_gap += gap;
    sum_sq += err * err;
    if (visit) visit(t, nu);
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
      const double td = static_cast<double>(t);
      out.checkpoints.push_back({t, nu, gap, sum_gap / td, sum_sq / td});
      ++next_cp;
    }
  }
  out.nu_final = nu;
  out.final_gap = problem.gap(nu);
  out.time_avg_gap = sum_gap / static_cast<double>(T);
  out.time_avg_sq_error = sum_sq / static_cast<double>(T);
  return out;
}

// RunRecord form: "gap" and "sq_error" every max(1, T/100) steps and at T,
// then the time averages and the final gap at T.
inline RunRecord dual_only_run(const DualOnlyProblem& problem, const OptimizerConfig& cfg, std::uint64_t seed) {
  Stopwatch clock;
  RunRecord rec;
  rec.seed = seed;
  rec.config_id = cfg.config_id;
  const std::uint64_t T = cfg.resolved_total(1);
  const std::uint64_t every = cfg.resolved_eval_every(1);
  const double nu_star = problem.stats().nu_star;
  auto res = dual_only_solve(problem, cfg, seed, {}, [&](std::uint64_t t, double nu) {
    if (t % every == 0 || t == T) {
      const double wall = clock.seconds();
      rec.add(t, wall, "gap", problem.gap(nu));
      rec.add(t, wall, "sq_error", (nu - nu_star) * (nu - nu_star));
    }
  });
  const double wall = clock.seconds();
  rec.add(T, wall, "time_avg_gap", res.time_avg_gap);
  rec.add(T, wall, "time_avg_sq_error", res.time_avg_sq_error);
  rec.add(T, wall, "final_gap", res.final_gap);
  return rec;
}

}  // namespace scent
