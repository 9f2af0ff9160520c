// gadyn: simulate benchmarks, fit polynomial models with the GA, resimulate
// fitted models and rerun the benchmark study.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 runtime failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gadyn/reproduce.hpp"
#include "gadyn/runner.hpp"

namespace {

using namespace gadyn;

constexpr int kValidationError = 1;
constexpr int kRuntimeError = 2;

struct SimulateArgs {
  std::string system = "linear";
  std::string out;
  std::optional<double> t_end, dt;
  std::vector<double> ic;
  std::string method;
};

struct FitArgs {
  std::string data;
  std::string system;
  std::string config;
  std::vector<std::string> sets;
  std::optional<unsigned> degree;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string derivatives;
  std::optional<unsigned> threads;
  bool fast = false;
  bool no_resimulate = false;
  std::string out;
};

struct ResimulateArgs {
  std::string model;
  std::string reference;
  std::vector<double> ic;
  std::optional<double> t0, t_end, dt;
  std::string out;
};

struct ReproduceArgs {
  bool fast = false;
  std::string out;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  unsigned threads = 0;
};

/// Writes to `path`, or stdout when it is empty or "-".
template <class Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

int run_simulate(const SimulateArgs& a) {
  const auto b = parse_benchmark(a.system);
  auto cfg = default_integrator_config(b);
  if (a.t_end) cfg.t_end = *a.t_end;
  if (a.dt) cfg.dt_out = *a.dt;
  if (!a.ic.empty()) cfg.initial_condition = a.ic;
  if (!a.method.empty()) cfg.method = parse_integration_method(a.method);
  const auto field = make_benchmark(b);
  if (cfg.initial_condition.size() != field.dimension())
    throw ConfigError("--ic needs " + std::to_string(field.dimension()) + " values for " + a.system);
  cfg.validate();
  const auto traj = integrate(field, cfg);
  emit(a.out, [&](std::ostream& o) { write_csv(o, traj); });
  return 0;
}

int run_fit(const FitArgs& a) {
  if (!a.data.empty() && !a.system.empty()) throw ConfigError("give either --data or --system, not both");
  ExperimentConfig cfg;
  if (!a.config.empty()) apply_config(cfg, std::filesystem::path(a.config));
  if (!a.system.empty()) cfg.set_system(a.system);
  if (!a.data.empty()) {
    cfg.set_system("csv");
    cfg.data_path = a.data;
  }
  if (a.fast) apply_fast_budget(cfg);
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.degree) cfg.degree = *a.degree;
  if (!a.mode.empty()) cfg.mode = parse_fit_mode(a.mode);
  if (a.seed) cfg.seed = *a.seed;
  if (!a.derivatives.empty()) cfg.derivatives = parse_derivative_source(a.derivatives);
  if (a.threads) cfg.threads = *a.threads;
  if (a.no_resimulate) cfg.resimulate = false;
  cfg.validate();

  const auto report = run_experiment(cfg);
  if (!a.out.empty()) {
    write_run_outputs(report, a.out);
    std::cerr << "wrote " << a.out << '\n';
  }
  write_report(std::cout, report);
  return 0;
}

int run_resimulate(const ResimulateArgs& a) {
  const auto model = read_model_csv(std::filesystem::path(a.model));
  const std::size_t n = model.names.size();
  std::optional<Trajectory> reference;
  if (!a.reference.empty()) {
    reference = read_csv(std::filesystem::path(a.reference));
    if (reference->dimension() != n)
      throw ConfigError("model has " + std::to_string(n) + " equations, reference has " +
                        std::to_string(reference->dimension()) + " states");
  }

  IntegratorConfig cfg;
  if (reference) {
    cfg.t0 = reference->t.front();
    cfg.t_end = reference->t.back();
    cfg.dt_out = reference->spacing();
    const auto first = reference->states.row(0);
    cfg.initial_condition.assign(first.begin(), first.end());
  }
  if (a.t0) cfg.t0 = *a.t0;
  if (a.t_end) cfg.t_end = *a.t_end;
  if (a.dt) cfg.dt_out = *a.dt;
  if (!a.ic.empty()) cfg.initial_condition = a.ic;
  if (cfg.initial_condition.empty()) throw ConfigError("--ic is required without --reference");
  if (cfg.initial_condition.size() != n)
    throw ConfigError("--ic has " + std::to_string(cfg.initial_condition.size()) + " values, model has " +
                      std::to_string(n) + " states");
  cfg.validate();

  const auto traj = integrate(model_rhs(model.basis, model.coeffs), cfg, model.names);
  emit(a.out, [&](std::ostream& o) { write_csv(o, traj); });

  if (reference) {
    if (reference->size() != traj.size() || std::abs(reference->t.back() - traj.t.back()) > 1e-9)
      throw ConfigError("reference grid differs from the resimulation grid; drop --t-end/--dt/--t0");
    const auto m = compare(reference->states, traj.states, traj.spacing());
    std::ostream& log = (a.out.empty() || a.out == "-") ? std::cerr : std::cout;
    log << "[comparison]\n";
    for (std::size_t j = 0; j < n; ++j)
      log << model.names[j] << ".ise=" << detail::format_real(m.equations[j].ise) << '\n'
          << model.names[j] << ".r2=" << detail::format_real(m.equations[j].r2) << '\n';
    log << "ise=" << detail::format_real(m.ise) << "\nr2=" << detail::format_real(m.r2) << '\n';
  }
  return 0;
}

int run_reproduce(const ReproduceArgs& a) {
  ReproductionOptions opt;
  opt.fast = a.fast;
  opt.seeds = a.seeds;
  opt.threads = a.threads;
  if (!a.out.empty()) opt.out_dir = a.out;
  opt.log = &std::cerr;
  std::cerr << "running " << (a.fast ? "fast" : "full") << " budget over " << a.seeds.size() << " seeds\n";
  const auto res = reproduce(opt);
  auto print = [&](std::ostream& o) {
    write_summary(o, res);
    o << "\nAcceptance\n";
    write_criteria(o, res.criteria);
  };
  print(std::cout);
  if (opt.out_dir) {
    std::ofstream f(*opt.out_dir / "summary.txt");
    print(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct ODEs from trajectories with a genetic algorithm over polynomial terms"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate a benchmark system and write its trajectory CSV");
  s->add_option("--system", sim.system, "linear, cubic or lorenz")->capture_default_str();
  s->add_option("--out", sim.out, "Output CSV (default stdout)");
  s->add_option("--t-end", sim.t_end, "End time");
  s->add_option("--dt", sim.dt, "Output spacing");
  s->add_option("--ic", sim.ic, "Initial condition, comma separated")->delimiter(',');
  s->add_option("--method", sim.method, "adaptive_rk45 or fixed_rk4");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit a polynomial model to a trajectory");
  auto* data_opt = f->add_option("--data", fit.data, "Trajectory CSV (t,x,y[,z])");
  f->add_option("--system", fit.system, "Generate data from linear, cubic or lorenz")->excludes(data_opt);
  f->add_option("--config", fit.config, "INI file with [data], [library], [fit], [ga], [dynamic] sections");
  f->add_option("--set", fit.sets, "Override one key, e.g. --set dynamic.threshold=1e-5");
  f->add_option("--degree", fit.degree, "Maximum monomial degree");
  f->add_option("--mode", fit.mode, "fixed or dynamic");
  f->add_option("--seed", fit.seed, "Base RNG seed");
  f->add_option("--derivatives", fit.derivatives, "numerical or analytic");
  f->add_option("--threads", fit.threads, "Worker threads (0 = one per equation)");
  f->add_flag("--fast", fit.fast, "Reduced budget: dynamic 300x60x60, fixed 600x1800");
  f->add_flag("--no-resimulate", fit.no_resimulate, "Skip integrating the fitted model");
  f->add_option("--out", fit.out, "Run directory for report, model and history files");

  ResimulateArgs re;
  auto* r = app.add_subcommand("resimulate", "Integrate a fitted model CSV");
  r->add_option("--model", re.model, "Model CSV (term,eq1,...)")->required();
  r->add_option("--reference", re.reference, "Trajectory to compare against; also supplies grid and IC");
  r->add_option("--ic", re.ic, "Initial condition, comma separated")->delimiter(',');
  r->add_option("--t0", re.t0, "Start time");
  r->add_option("--t-end", re.t_end, "End time");
  r->add_option("--dt", re.dt, "Output spacing");
  r->add_option("--out", re.out, "Output CSV (default stdout)");

  ReproduceArgs rp;
  auto* p = app.add_subcommand("reproduce-paper", "Run the six benchmark experiments and check the acceptance criteria");
  p->add_flag("--fast", rp.fast, "Reduced budget");
  p->add_option("--out", rp.out, "Directory for per-run outputs and summary.txt");
  p->add_option("--seeds", rp.seeds, "Seeds for the dynamic runs")->delimiter(',');
  p->add_option("--threads", rp.threads, "Worker threads per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kValidationError;
  }

  try {
    if (*s) return run_simulate(sim);
    if (*f) return run_fit(fit);
    if (*r) return run_resimulate(re);
    if (*p) return run_reproduce(rp);
  } catch (const IntegrationError& e) {
    std::cerr << "error: integration failed: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kValidationError;
}
