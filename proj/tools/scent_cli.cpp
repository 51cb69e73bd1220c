// scent: experiment driver.
//
//   scent dual-sim    SPMD vs SGD on Gaussian scores
//   scent dro         KL-regularized DRO regression from a CSV
//   scent xc          extreme classification (synthetic or CSV)
//   scent pauc        one-way partial AUC (synthetic or CSV)
//   scent bench-suite xc and pauc with the shipped grids, plus the ordering verdict
//   scent verify      numerical property checks
//
// Exit codes: 0 ok, 2 configuration, 3 data or I/O, 4 numerical (including
// failed checks).

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scent/dataio.hpp"
#include "scent/errors.hpp"
#include "scent/experiments/bench.hpp"
#include "scent/experiments/checks.hpp"
#include "scent/experiments/dro.hpp"
#include "scent/experiments/dual_sim.hpp"
#include "scent/experiments/metrics.hpp"
#include "scent/experiments/settings.hpp"
#include "scent/problems/multiclass.hpp"
#include "scent/problems/pauc.hpp"

namespace fs = std::filesystem;
using namespace scent;

namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;
constexpr int kNumericalExit = 4;

const std::vector<std::string> kMethodSections{"scent", "bsgd", "asgd", "asgd_softplus", "umax", "sox"};

struct Invocation {
  std::string config;
  Settings overrides;
  std::vector<std::string> sets;
  bool all_checks = false;
};

// Binds a flag whose value is written to a settings key.
void bind_key(CLI::App* sub, Invocation& inv, const std::string& flag, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(flag, [&inv, key](const std::string& v) { inv.overrides.set(key, v); }, help);
}

void add_common(CLI::App* sub, Invocation& inv, const std::string& method_key) {
  sub->add_option("--config", inv.config, "settings file of section.key = value lines");
  bind_key(sub, inv, "--seed", "run.seeds", "single seed");
  bind_key(sub, inv, "--seeds", "run.seeds", "comma-separated seeds");
  bind_key(sub, inv, "--out", "run.out", "output directory");
  bind_key(sub, inv, "--threads", "run.threads", "worker threads");
  if (!method_key.empty()) bind_key(sub, inv, "--method", method_key, "method name or comma-separated list");
  sub->add_option("--set", inv.sets, "extra section.key=value override");
}

Settings resolve(const Invocation& inv) {
  Settings s = inv.config.empty() ? Settings{} : Settings::load(inv.config);
  s.merge(inv.overrides);
  for (const auto& kv : inv.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + kv + "'");
    s.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return s;
}

std::set<std::string> allowed_sections(std::initializer_list<const char*> sections, bool methods) {
  std::set<std::string> out{"run.seeds", "run.out", "run.threads"};
  for (const char* s : sections) out.insert(std::string(s) + ".*");
  if (methods) {
    for (const auto& m : kMethodSections) out.insert(m + ".*");
    out.insert("optimizer.*");
  }
  return out;
}

std::vector<std::uint64_t> seeds_of(const Settings& s, std::vector<std::uint64_t> fallback) {
  return s.get_u64s("run.seeds", fallback);
}
fs::path out_of(const Settings& s, const std::string& fallback) { return s.get_string("run.out", fallback); }
std::size_t threads_of(const Settings& s) { return s.get_u64("run.threads", default_threads()); }

std::vector<Method> methods_of(const Settings& s, const std::string& key, const std::vector<std::string>& fallback) {
  std::vector<Method> out;
  for (const auto& name : s.get_strings(key, fallback)) out.push_back(parse_method(name));
  return out;
}

void print_records_note(const fs::path& out, std::size_t n) {
  std::cout << "wrote " << n << " run files and summary.csv to " << out.string() << '\n';
}

int cmd_dual_sim(const Settings& s) {
  s.check_known(allowed_sections({"dual_sim"}, false));
  DualSimConfig cfg;
  cfg.mus = s.get_doubles("dual_sim.mus", cfg.mus);
  cfg.sigmas = s.get_doubles("dual_sim.sigmas", cfg.sigmas);
  cfg.spmd_log_alpha = s.get_doubles("dual_sim.spmd_log_alpha", cfg.spmd_log_alpha);
  cfg.sgd_alpha = s.get_doubles("dual_sim.sgd_alpha", cfg.sgd_alpha);
  cfg.steps = s.get_u64("dual_sim.steps", cfg.steps);
  cfg.record_every = s.get_u64("dual_sim.record_every", cfg.record_every);
  const std::string init = s.get_string("dual_sim.nu_init", "first_sample");
  cfg.nu_from_first_sample = init == "first_sample";
  if (!cfg.nu_from_first_sample) cfg.nu_init = s.get_double("dual_sim.nu_init", 0.0);
  cfg.seeds = seeds_of(s, cfg.seeds);
  cfg.threads = threads_of(s);
  const fs::path out = out_of(s, "out/dual_sim");
  cfg.validate();

  const auto res = run_dual_sim(cfg);
  emit_metrics(res.records, out);
  write_file_atomic(out / "dual_sim_summary.csv", dual_sim_summary_csv(res));
  std::cout << "mu,sigma,time_avg_ratio,final_ratio\n";
  for (const auto& c : res.cells) {
    std::cout << format_double(c.mu) << ',' << format_double(c.sigma) << ',' << format_double(c.time_avg_ratio()) << ','
              << format_double(c.final_ratio()) << '\n';
  }
  print_records_note(out, res.records.size());
  return 0;
}

int cmd_dro(const Settings& s) {
  s.check_known(allowed_sections({"dro"}, true));
  const auto path = s.raw("dro.data");
  if (!path) throw ConfigError("dro: dro.data (CSV path) is required");
  const std::string dataset = s.get_string("dro.dataset", "custom");
  DroConfig cfg;
  cfg.tau = s.get_double("dro.tau", cfg.tau);
  cfg.epochs = s.get_u64("dro.epochs", cfg.epochs);
  cfg.batch = s.get_u64("dro.batch", cfg.batch);
  cfg.momentum = s.get_double("dro.momentum", cfg.momentum);
  cfg.cosine = s.get_bool("dro.cosine", cfg.cosine);
  cfg.ls_init = s.get_bool("dro.ls_init", cfg.ls_init);
  cfg.reuse_inner_sample = s.get_bool("dro.reuse_inner_sample", cfg.reuse_inner_sample);
  cfg.seeds = seeds_of(s, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  cfg.threads = threads_of(s);
  cfg.tag = s.get_string("dro.tag", dataset);
  for (Method m : methods_of(s, "dro.methods", {"scent", "bsgd"})) {
    const std::string name(to_string(m));
    DroMethodParams p = tuned_dro_params(dataset, cfg.tau, m).value_or(DroMethodParams{});
    p.method = m;
    if (!tuned_dro_params(dataset, cfg.tau, m) && !s.scoped(name, "lr")) {
      throw ConfigError("dro: no tuned values for " + name + " on '" + dataset + "' at this tau; set " + name + ".lr");
    }
    p.lr = s.scoped_double(name, "lr", p.lr);
    p.alpha = s.scoped_double(name, "alpha", p.alpha);
    if (auto la = s.scoped(name, "log_alpha")) p.alpha = std::exp(Settings::to_double(name + ".log_alpha", *la));
    p.gamma = s.scoped_double(name, "gamma", p.gamma);
    p.rho = s.scoped_double(name, "rho", p.rho);
    p.delta = s.scoped_double(name, "delta", p.delta);
    cfg.methods.push_back(p);
  }
  const bool standardize_features = s.get_bool("dro.standardize", dataset == "california");
  const bool normalize_target = s.get_bool("dro.normalize_target", dataset == "abalone");
  const fs::path out = out_of(s, "out/dro");

  FeatureDataset data = load_csv(*path, LabelKind::regression);
  cfg.validate(data.rows());
  if (standardize_features) data = standardize(std::move(data));
  if (normalize_target) data = normalize_targets(std::move(data));

  const auto res = run_dro(data, cfg);
  emit_metrics(res.records, out);
  write_file_atomic(out / "dro_summary.csv", dro_summary_csv(cfg, res));
  std::cout << dro_summary_csv(cfg, res);
  print_records_note(out, res.records.size());
  return 0;
}

// Grid for one method: "<m>.lrs"/"<m>.params" lists, or "<m>.lr"/"<m>.param"
// singletons, over the shipped defaults.
MethodGrid grid_of(const Settings& s, Method m, const MethodGrid& fallback) {
  const std::string name(to_string(m));
  MethodGrid g = fallback;
  if (auto v = s.raw(name + ".lrs")) g.lrs = s.get_doubles(name + ".lrs", {});
  if (auto v = s.raw(name + ".lr")) g.lrs = {s.get_double(name + ".lr", 0.0)};
  if (auto v = s.raw(name + ".params")) g.params = s.get_doubles(name + ".params", {});
  if (auto v = s.raw(name + ".param")) g.params = {s.get_double(name + ".param", 0.0)};
  if (auto v = s.raw(name + ".log_alphas")) {
    g.params.clear();
    for (double la : s.get_doubles(name + ".log_alphas", {})) g.params.push_back(std::exp(la));
  }
  return g;
}

BenchConfig bench_config(const Settings& s, const std::map<Method, MethodGrid>& defaults, std::uint64_t epochs,
                         std::size_t batch, const std::string& tag) {
  BenchConfig cfg;
  cfg.methods = methods_of(s, "bench.methods", {"scent", "sox", "asgd"});
  for (Method m : cfg.methods) {
    auto it = defaults.find(m);
    cfg.grids[m] = grid_of(s, m, it != defaults.end() ? it->second : MethodGrid{});
  }
  cfg.epochs = s.get_u64("bench.epochs", epochs);
  cfg.batch_anchors = s.get_u64("bench.batch_anchors", batch);
  cfg.batch_inner = s.get_u64("bench.batch_inner", cfg.batch_inner);
  cfg.momentum = s.get_double("bench.momentum", cfg.momentum);
  cfg.cosine = s.get_bool("bench.cosine", cfg.cosine);
  cfg.dual_clamp = s.get_bool("bench.dual_clamp", cfg.dual_clamp);
  cfg.softplus_rho = s.get_double("bench.rho", cfg.softplus_rho);
  cfg.umax_delta = s.get_double("bench.delta", cfg.umax_delta);
  cfg.final_eval_only = s.get_bool("bench.final_eval_only", cfg.final_eval_only);
  cfg.seeds = seeds_of(s, cfg.seeds);
  cfg.threads = threads_of(s);
  cfg.tag = tag;
  return cfg;
}

MulticlassProblem xc_problem(const Settings& s) {
  std::optional<double> radius;
  if (s.has("xc.radius")) radius = s.get_double("xc.radius", 0.0);
  const std::string neg = s.get_string("xc.negatives", "in_batch");
  if (neg != "in_batch" && neg != "uniform") throw ConfigError("xc.negatives must be in_batch or uniform");
  const auto mode = neg == "in_batch" ? NegativeSampling::in_batch : NegativeSampling::uniform;
  if (auto path = s.raw("xc.data")) {
    FeatureDataset data = load_csv(*path, LabelKind::classification);
    const std::size_t K = s.get_u64("xc.classes", static_cast<std::uint64_t>(data.labels.maxCoeff()) + 1);
    return MulticlassProblem(std::move(data), K, mode, radius);
  }
  const std::size_t K = s.get_u64("xc.classes", 100);
  return MulticlassProblem(synth_multiclass(s.get_u64("xc.n", 10000), s.get_u64("xc.d", 16), K, s.get_double("xc.noise", 1.0),
                                            s.get_u64("xc.data_seed", 42)),
                           K, mode, radius);
}

PaucProblem pauc_problem(const Settings& s) {
  std::optional<double> radius;
  if (s.has("pauc.radius")) radius = s.get_double("pauc.radius", 0.0);
  const double tau = s.get_double("pauc.tau", 0.1);
  const double margin = s.get_double("pauc.margin", 0.5);
  if (auto path = s.raw("pauc.data")) return PaucProblem(load_csv(*path, LabelKind::sign), tau, margin, radius);
  return PaucProblem(synth_pauc(s.get_u64("pauc.n", 4000), s.get_u64("pauc.d", 16), s.get_double("pauc.pos_fraction", 0.1),
                                s.get_double("pauc.shift", 1.0), s.get_double("pauc.noise", 1.0), s.get_u64("pauc.data_seed", 42)),
                     tau, margin, radius);
}

template <class P>
BenchResult bench_and_emit(const P& problem, const BenchConfig& cfg, const fs::path& out) {
  // Every grid point is checked before the first run.
  cfg.validate(problem.n_anchors());
  const auto res = run_bench(problem, cfg);
  emit_metrics(res.records, out);
  write_file_atomic(out / "bench_summary.csv", bench_summary_csv(res));
  std::cout << "initial objective " << format_double(res.initial_objective) << '\n';
  for (const auto& b : res.best) {
    std::cout << std::left << std::setw(14) << to_string(b.method) << " lr=" << format_double(b.lr)
              << " param=" << format_double(b.param) << " final=" << format_double(b.mean_final) << '\n';
  }
  print_records_note(out, res.records.size());
  return res;
}

int cmd_xc(const Settings& s) {
  s.check_known(allowed_sections({"xc", "bench"}, true));
  const auto problem = xc_problem(s);
  bench_and_emit(problem, bench_config(s, xc_default_grids(), 50, 128, "xc"), out_of(s, "out/xc"));
  return 0;
}

int cmd_pauc(const Settings& s) {
  s.check_known(allowed_sections({"pauc", "bench"}, true));
  const auto problem = pauc_problem(s);
  bench_and_emit(problem, bench_config(s, pauc_default_grids(), 60, 64, "pauc"), out_of(s, "out/pauc"));
  return 0;
}

int cmd_bench_suite(const Settings& s) {
  s.check_known(allowed_sections({"xc", "pauc", "bench"}, true));
  const fs::path out = out_of(s, "out/bench_suite");
  const auto xc = xc_problem(s);
  const auto pa = pauc_problem(s);
  const auto xc_cfg = bench_config(s, xc_default_grids(), 50, 128, "xc");
  const auto pa_cfg = bench_config(s, pauc_default_grids(), 60, 64, "pauc");
  xc_cfg.validate(xc.n_anchors());
  pa_cfg.validate(pa.n_anchors());
  std::cout << "[xc]\n";
  const auto rx = bench_and_emit(xc, xc_cfg, out / "xc");
  std::cout << "[pauc]\n";
  const auto rp = bench_and_emit(pa, pa_cfg, out / "pauc");
  std::ostringstream csv;
  csv << "problem,method,final_objective_mean\n";
  for (const auto* r : {&rx, &rp}) {
    for (const auto& b : r->best) csv << (r == &rx ? "xc" : "pauc") << ',' << to_string(b.method) << ',' << format_double(b.mean_final) << '\n';
  }
  write_file_atomic(out / "ordering.csv", csv.str());
  return 0;
}

int cmd_verify(bool all) {
  bool failed = false;
  for (const auto& c : acceptance_checks()) {
    if (!all && !c.fast) continue;
    const auto r = c.run();
    failed = failed || r.outcome == Outcome::fail;
    std::cout << c.id << ' ' << to_string(r.outcome) << ' ' << c.title << ": " << r.detail << std::endl;
  }
  return failed ? kNumericalExit : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SCENT and baselines for compositional entropic risk"};
  app.require_subcommand(1);
  Invocation inv;
  auto* dual = app.add_subcommand("dual-sim", "SPMD vs SGD on the scalar dual problem");
  add_common(dual, inv, "");
  bind_key(dual, inv, "--steps", "dual_sim.steps", "iterations per run");
  bind_key(dual, inv, "--mus", "dual_sim.mus", "comma-separated mu grid");
  bind_key(dual, inv, "--sigmas", "dual_sim.sigmas", "comma-separated sigma grid");
  bind_key(dual, inv, "--spmd-log-alpha", "dual_sim.spmd_log_alpha", "log alpha per mu");
  bind_key(dual, inv, "--sgd-alpha", "dual_sim.sgd_alpha", "SGD step per mu");

  auto* dro = app.add_subcommand("dro", "KL-regularized DRO regression");
  add_common(dro, inv, "dro.methods");
  bind_key(dro, inv, "--data", "dro.data", "regression CSV");
  bind_key(dro, inv, "--dataset", "dro.dataset", "california, abalone or custom");
  bind_key(dro, inv, "--tau", "dro.tau", "temperature");
  bind_key(dro, inv, "--epochs", "dro.epochs", "epochs");
  bind_key(dro, inv, "--batch", "dro.batch", "rows per step");
  bind_key(dro, inv, "--momentum", "dro.momentum", "heavy-ball momentum");
  bind_key(dro, inv, "--lr", "optimizer.lr", "learning rate for every method");
  bind_key(dro, inv, "--alpha", "optimizer.alpha", "dual step for every method");

  auto* xc = app.add_subcommand("xc", "extreme classification");
  add_common(xc, inv, "bench.methods");
  bind_key(xc, inv, "--data", "xc.data", "classification CSV");
  bind_key(xc, inv, "--classes", "xc.classes", "number of classes");
  bind_key(xc, inv, "--n", "xc.n", "synthetic rows");
  bind_key(xc, inv, "--d", "xc.d", "synthetic features");
  bind_key(xc, inv, "--epochs", "bench.epochs", "epochs");
  bind_key(xc, inv, "--batch", "bench.batch_anchors", "anchors per step");

  auto* pauc = app.add_subcommand("pauc", "one-way partial AUC");
  add_common(pauc, inv, "bench.methods");
  bind_key(pauc, inv, "--data", "pauc.data", "CSV with +1/-1 labels");
  bind_key(pauc, inv, "--tau", "pauc.tau", "temperature");
  bind_key(pauc, inv, "--margin", "pauc.margin", "squared-hinge margin");
  bind_key(pauc, inv, "--n", "pauc.n", "synthetic rows");
  bind_key(pauc, inv, "--d", "pauc.d", "synthetic features");
  bind_key(pauc, inv, "--epochs", "bench.epochs", "epochs");
  bind_key(pauc, inv, "--batch", "bench.batch_anchors", "positives per step");

  auto* suite = app.add_subcommand("bench-suite", "xc and pauc comparisons with the shipped grids");
  add_common(suite, inv, "bench.methods");
  bind_key(suite, inv, "--epochs", "bench.epochs", "epochs for both problems");

  auto* verify = app.add_subcommand("verify", "numerical property checks");
  verify->add_flag("--all", inv.all_checks, "include the slow rate and experiment checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    if (verify->parsed()) return cmd_verify(inv.all_checks);
    const Settings s = resolve(inv);
    if (dual->parsed()) return cmd_dual_sim(s);
    if (dro->parsed()) return cmd_dro(s);
    if (xc->parsed()) return cmd_xc(s);
    if (pauc->parsed()) return cmd_pauc(s);
    if (suite->parsed()) return cmd_bench_suite(s);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  }
  return 0;
}
