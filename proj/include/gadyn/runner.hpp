#pragma once

// Experiment orchestration: data, derivatives, per-equation fits, metrics,
// resimulation and run outputs.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gadyn/dynlim.hpp"
#include "gadyn/dynsys.hpp"
#include "gadyn/fitness.hpp"
#include "gadyn/ga.hpp"
#include "gadyn/library.hpp"
#include "gadyn/metrics.hpp"
#include "gadyn/signal.hpp"
#include "gadyn/trajectory.hpp"

namespace gadyn {

/// Bad configuration value, unknown key or inconsistent settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FitMode { fixed, dynamic };

[[nodiscard]] inline std::string_view to_string(FitMode m) noexcept {
  return m == FitMode::fixed ? "fixed" : "dynamic";
}

[[nodiscard]] inline FitMode parse_fit_mode(std::string_view s) {
  if (s == "fixed") return FitMode::fixed;
  if (s == "dynamic") return FitMode::dynamic;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected fixed or dynamic)");
}

[[nodiscard]] inline DerivativeSource parse_derivative_source(std::string_view s) {
  if (s == "numerical") return DerivativeSource::numerical;
  if (s == "analytic") return DerivativeSource::analytic;
  throw ConfigError("unknown derivative source '" + std::string(s) + "' (expected numerical or analytic)");
}

/// Symmetric fixed-mode search limit: 10 for the oscillators, 30 for Lorenz.
[[nodiscard]] inline double default_search_limit(std::string_view system) {
  return system == "lorenz" ? 30.0 : 10.0;
}

struct ExperimentConfig {
  /// linear, cubic, lorenz, or csv (data read from data_path).
  std::string system = "linear";
  std::filesystem::path data_path;
  IntegratorConfig integrator = default_integrator_config(Benchmark::linear);
  unsigned degree = 3;
  FitMode mode = FitMode::dynamic;
  DerivativeSource derivatives = DerivativeSource::numerical;
  /// Fixed mode: population, generations and operators of the single GA.
  GAConfig ga;
  double search_limit = 10.0;
  DynConfig dynamic;
  std::uint64_t seed = 1;
  /// Worker threads for the per-equation fits; 0 picks one per equation,
  /// capped by the hardware.
  unsigned threads = 0;
  bool resimulate = true;

  [[nodiscard]] static ExperimentConfig for_system(std::string_view system) {
    ExperimentConfig cfg;
    cfg.set_system(system);
    return cfg;
  }

  /// Switches the system and resets the settings whose defaults depend on it.
  void set_system(std::string_view name) {
    if (name != "csv") {
      try {
        integrator = default_integrator_config(parse_benchmark(name));
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown system '" + std::string(name) + "' (expected linear, cubic, lorenz or csv)");
      }
    }
    system = std::string(name);
    search_limit = default_search_limit(system);
  }

  [[nodiscard]] std::optional<Benchmark> benchmark() const {
    if (system == "csv") return std::nullopt;
    return parse_benchmark(system);
  }

  [[nodiscard]] std::uint64_t evaluations_per_equation() const {
    return mode == FitMode::fixed ? ga.evaluations() : dynamic.evaluations();
  }

  void validate() const {
    if (system != "csv") {
      try {
        (void)parse_benchmark(system);
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown system '" + system + "' (expected linear, cubic, lorenz or csv)");
      }
    }
    try {
      if (system == "csv") {
        if (data_path.empty()) throw ConfigError("system csv needs a data path");
        if (derivatives == DerivativeSource::analytic)
          throw ConfigError("analytic derivatives need a known system, not csv data");
      } else {
        integrator.validate();
        if (integrator.initial_condition.size() != make_benchmark(*benchmark()).dimension())
          throw ConfigError("initial condition has " + std::to_string(integrator.initial_condition.size()) +
                            " values, system " + system + " has " +
                            std::to_string(make_benchmark(*benchmark()).dimension()) + " states");
      }
      if (degree < 1 || degree > 8) throw ConfigError("degree must be in [1, 8]");
      if (!(search_limit > 0.0) || !std::isfinite(search_limit)) throw ConfigError("search_limit must be > 0");
      ga.validate();
      dynamic.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

/// Reduced budget for quick runs: dynamic 300 x 60 x 60 and an equal-cost
/// fixed GA of 600 x 1800.
inline void apply_fast_budget(ExperimentConfig& cfg) {
  cfg.dynamic.outer_iterations = 300;
  cfg.dynamic.inner_population = 60;
  cfg.dynamic.inner_generations = 60;
  cfg.ga.population_size = 600;
  cfg.ga.generations = 1800;
}

namespace detail {

/// Shortest text that parses back to exactly `v`.
inline std::string format_real(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : format_double(v);
}

inline double parse_real(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key + ": '" + std::string(text) + "' is not a finite number");
  return v;
}

inline std::uint64_t parse_unsigned(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError(key + ": '" + std::string(text) + "' is not a non-negative integer");
  return v;
}

inline std::size_t parse_count(const std::string& key, std::string_view text) {
  return static_cast<std::size_t>(parse_unsigned(key, text));
}

inline bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(key + ": '" + std::string(text) + "' is not a boolean");
}

/// Comma and/or whitespace separated reals.
inline std::vector<double> parse_reals(const std::string& key, std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_real(key, token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t')
      flush();
    else
      token += c;
  }
  flush();
  if (out.empty()) throw ConfigError(key + ": expected a list of numbers");
  return out;
}

inline std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

struct ConfigKey {
  const char* name;  // section.key
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

inline const std::vector<ConfigKey>& config_keys() {
  using C = ExperimentConfig;
  static const std::vector<ConfigKey> keys = {
      {"data.system", [](C& c, const std::string& v) { c.set_system(trim(v)); }, [](const C& c) { return c.system; }},
      {"data.path", [](C& c, const std::string& v) { c.data_path = std::string(trim(v)); },
       [](const C& c) { return c.data_path.string(); }},
      {"data.t0", [](C& c, const std::string& v) { c.integrator.t0 = parse_real("data.t0", v); },
       [](const C& c) { return format_real(c.integrator.t0); }},
      {"data.t_end", [](C& c, const std::string& v) { c.integrator.t_end = parse_real("data.t_end", v); },
       [](const C& c) { return format_real(c.integrator.t_end); }},
      {"data.dt", [](C& c, const std::string& v) { c.integrator.dt_out = parse_real("data.dt", v); },
       [](const C& c) { return format_real(c.integrator.dt_out); }},
      {"data.ic", [](C& c, const std::string& v) { c.integrator.initial_condition = parse_reals("data.ic", v); },
       [](const C& c) { return join_reals(c.integrator.initial_condition); }},
      {"data.method",
       [](C& c, const std::string& v) {
         try {
           c.integrator.method = parse_integration_method(trim(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(std::string("data.method: ") + e.what());
         }
       },
       [](const C& c) { return std::string(to_string(c.integrator.method)); }},
      {"data.rel_tol", [](C& c, const std::string& v) { c.integrator.rel_tol = parse_real("data.rel_tol", v); },
       [](const C& c) { return format_real(c.integrator.rel_tol); }},
      {"data.abs_tol", [](C& c, const std::string& v) { c.integrator.abs_tol = parse_real("data.abs_tol", v); },
       [](const C& c) { return format_real(c.integrator.abs_tol); }},
      {"data.derivatives", [](C& c, const std::string& v) { c.derivatives = parse_derivative_source(trim(v)); },
       [](const C& c) { return std::string(to_string(c.derivatives)); }},
      {"library.degree",
       [](C& c, const std::string& v) { c.degree = static_cast<unsigned>(parse_unsigned("library.degree", v)); },
       [](const C& c) { return std::to_string(c.degree); }},
      {"fit.mode", [](C& c, const std::string& v) { c.mode = parse_fit_mode(trim(v)); },
       [](const C& c) { return std::string(to_string(c.mode)); }},
      {"fit.seed", [](C& c, const std::string& v) { c.seed = parse_unsigned("fit.seed", v); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"fit.threads",
       [](C& c, const std::string& v) { c.threads = static_cast<unsigned>(parse_unsigned("fit.threads", v)); },
       [](const C& c) { return std::to_string(c.threads); }},
      {"fit.resimulate", [](C& c, const std::string& v) { c.resimulate = parse_bool("fit.resimulate", v); },
       [](const C& c) { return std::string(c.resimulate ? "true" : "false"); }},
      {"ga.population_size", [](C& c, const std::string& v) { c.ga.population_size = parse_count("ga.population_size", v); },
       [](const C& c) { return std::to_string(c.ga.population_size); }},
      {"ga.generations", [](C& c, const std::string& v) { c.ga.generations = parse_count("ga.generations", v); },
       [](const C& c) { return std::to_string(c.ga.generations); }},
      {"ga.mutation_prob", [](C& c, const std::string& v) { c.ga.mutation_prob = parse_real("ga.mutation_prob", v); },
       [](const C& c) { return format_real(c.ga.mutation_prob); }},
      {"ga.elitism_frac", [](C& c, const std::string& v) { c.ga.elitism_frac = parse_real("ga.elitism_frac", v); },
       [](const C& c) { return format_real(c.ga.elitism_frac); }},
      {"ga.pressure_frac", [](C& c, const std::string& v) { c.ga.pressure_frac = parse_real("ga.pressure_frac", v); },
       [](const C& c) { return format_real(c.ga.pressure_frac); }},
      {"ga.search_limit", [](C& c, const std::string& v) { c.search_limit = parse_real("ga.search_limit", v); },
       [](const C& c) { return format_real(c.search_limit); }},
      {"dynamic.outer_iterations",
       [](C& c, const std::string& v) { c.dynamic.outer_iterations = parse_count("dynamic.outer_iterations", v); },
       [](const C& c) { return std::to_string(c.dynamic.outer_iterations); }},
      {"dynamic.population",
       [](C& c, const std::string& v) { c.dynamic.inner_population = parse_count("dynamic.population", v); },
       [](const C& c) { return std::to_string(c.dynamic.inner_population); }},
      {"dynamic.generations",
       [](C& c, const std::string& v) { c.dynamic.inner_generations = parse_count("dynamic.generations", v); },
       [](const C& c) { return std::to_string(c.dynamic.inner_generations); }},
      {"dynamic.threshold", [](C& c, const std::string& v) { c.dynamic.threshold = parse_real("dynamic.threshold", v); },
       [](const C& c) { return format_real(c.dynamic.threshold); }},
      {"dynamic.stagnation",
       [](C& c, const std::string& v) { c.dynamic.stagnation_f = parse_count("dynamic.stagnation", v); },
       [](const C& c) { return std::to_string(c.dynamic.stagnation_f); }},
      {"dynamic.expand_trigger",
       [](C& c, const std::string& v) { c.dynamic.expand_trigger = parse_real("dynamic.expand_trigger", v); },
       [](const C& c) { return format_real(c.dynamic.expand_trigger); }},
      {"dynamic.expand_factor",
       [](C& c, const std::string& v) { c.dynamic.expand_factor = parse_real("dynamic.expand_factor", v); },
       [](const C& c) { return format_real(c.dynamic.expand_factor); }},
      {"dynamic.shrink_factor",
       [](C& c, const std::string& v) { c.dynamic.shrink_factor = parse_real("dynamic.shrink_factor", v); },
       [](const C& c) { return format_real(c.dynamic.shrink_factor); }},
      {"dynamic.mutation_prob",
       [](C& c, const std::string& v) { c.dynamic.mutation_prob = parse_real("dynamic.mutation_prob", v); },
       [](const C& c) { return format_real(c.dynamic.mutation_prob); }},
      {"dynamic.elitism_frac",
       [](C& c, const std::string& v) { c.dynamic.elitism_frac = parse_real("dynamic.elitism_frac", v); },
       [](const C& c) { return format_real(c.dynamic.elitism_frac); }},
      {"dynamic.pressure_frac",
       [](C& c, const std::string& v) { c.dynamic.pressure_frac = parse_real("dynamic.pressure_frac", v); },
       [](const C& c) { return format_real(c.dynamic.pressure_frac); }},
      {"dynamic.improvement_tol",
       [](C& c, const std::string& v) { c.dynamic.improvement_tol = parse_real("dynamic.improvement_tol", v); },
       [](const C& c) { return format_real(c.dynamic.improvement_tol); }},
      {"dynamic.warm_start", [](C& c, const std::string& v) { c.dynamic.warm_start = parse_bool("dynamic.warm_start", v); },
       [](const C& c) { return std::string(c.dynamic.warm_start ? "true" : "false"); }},
  };
  return keys;
}

inline const ConfigKey* find_config_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (name == k.name) return &k;
  return nullptr;
}

}  // namespace detail

/// Sets one `section.key` value. Unknown keys are a ConfigError.
inline void set_config_value(ExperimentConfig& cfg, std::string_view key, const std::string& value) {
  const auto* k = detail::find_config_key(key);
  if (!k) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  k->set(cfg, value);
}

/// Applies an INI document (sections data, library, fit, ga, dynamic) on top
/// of `cfg`. `data.system` is applied first because it resets the
/// system-dependent defaults. Full-line comments start with ';' or '#'.
inline void apply_config(ExperimentConfig& cfg, std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' is outside any section");
    for (const auto& [key, node] : body) entries.emplace_back(section + "." + key, node.data());
  }
  std::stable_partition(entries.begin(), entries.end(), [](const auto& e) { return e.first == "data.system"; });
  for (const auto& [key, value] : entries) set_config_value(cfg, key, value);
}

inline void apply_config(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  apply_config(cfg, in);
}

/// Writes every key, so the file alone reproduces the run.
inline void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  std::string section;
  for (const auto& k : detail::config_keys()) {
    const std::string_view name = k.name;
    const auto dot = name.find('.');
    const std::string sec(name.substr(0, dot));
    if (sec != section) {
      out << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    out << name.substr(dot + 1) << " = " << k.get(cfg) << '\n';
  }
}

struct EquationFit {
  std::string name;
  std::vector<double> coefficients;
  double fitness = 0.0;
  std::uint64_t evaluations = 0;
  double seconds = 0.0;
  /// Fixed mode: best fitness per generation.
  std::vector<double> ga_history;
  /// Dynamic mode: full outer-loop record.
  std::optional<DynamicResult> dynamic;
};

struct RunReport {
  ExperimentConfig config;
  Trajectory data;
  DerivativeSet derivatives;
  Basis basis{1, {}};
  std::vector<std::string> labels;
  CoefficientMatrix coefficients;
  std::vector<EquationFit> equations;
  SparsityReport sparsity;
  MetricReport derivative_metrics;
  std::optional<Trajectory> resimulated;
  std::optional<MetricReport> resimulation_metrics;
  std::string resimulation_error;
  double wall_seconds = 0.0;

  /// Every equation reproduces its derivative signal with R^2 >= 0.99.
  [[nodiscard]] bool converged() const {
    if (derivative_metrics.equations.empty()) return false;
    for (const auto& m : derivative_metrics.equations)
      if (!(m.r2 >= 0.99)) return false;
    return true;
  }

  [[nodiscard]] std::uint64_t evaluations() const {
    std::uint64_t total = 0;
    for (const auto& e : equations) total += e.evaluations;
    return total;
  }
};

/// Data for the configured system: simulated benchmark or CSV file.
[[nodiscard]] inline Trajectory load_data(const ExperimentConfig& cfg) {
  if (auto b = cfg.benchmark()) return integrate(make_benchmark(*b), cfg.integrator);
  return read_csv(cfg.data_path);
}

namespace detail {

inline EquationFit fit_equation(const ExperimentConfig& cfg, const FeatureMatrix& features,
                                const std::vector<double>& target, double dt, std::size_t eq) {
  const auto t0 = std::chrono::steady_clock::now();
  const IseFitness fitness(features, target, dt);
  const std::uint64_t seed = derive_seed(cfg.seed, eq);
  EquationFit fit;
  if (cfg.mode == FitMode::fixed) {
    GAConfig ga = cfg.ga;
    ga.rng_seed = seed;
    const std::size_t p = features.cols();
    auto result = run_ga(fitness, GeneBounds::symmetric(p, cfg.search_limit), FrozenMask(p, false), ga);
    fit.coefficients = std::move(result.best.genes);
    fit.fitness = result.best.fitness;
    fit.evaluations = result.evaluations;
    fit.ga_history = std::move(result.history);
  } else {
    auto result = run_dynamic(fitness, target, features, cfg.dynamic, seed);
    fit.coefficients = result.best.genes;
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
      if (result.frozen[j]) fit.coefficients[j] = 0.0;
    fit.fitness = result.best.fitness;
    fit.evaluations = result.evaluations;
    fit.dynamic = std::move(result);
  }
  fit.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return fit;
}

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

}  // namespace detail

/// Integrates the polynomial model from the first state of `reference` on
/// the reference grid.
[[nodiscard]] inline Trajectory resimulate(const Basis& basis, const CoefficientMatrix& coeffs,
                                           const Trajectory& reference, const IntegratorConfig& settings) {
  IntegratorConfig cfg = settings;
  cfg.t0 = reference.t.front();
  cfg.t_end = reference.t.back();
  cfg.dt_out = reference.spacing();
  const auto first = reference.states.row(0);
  cfg.initial_condition.assign(first.begin(), first.end());
  return integrate(model_rhs(basis, coeffs), cfg, reference.names);
}

/// Full pipeline for one configuration. Equations are fitted independently
/// (in parallel when threads allow) with seeds derived from cfg.seed.
[[nodiscard]] inline RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;
  report.data = load_data(cfg);
  const Trajectory& data = report.data;
  const double dt = data.spacing();
  report.derivatives = cfg.derivatives == DerivativeSource::analytic
                           ? analytic_derivatives(make_benchmark(*cfg.benchmark()), data)
                           : differentiate(data);
  if (auto b = cfg.benchmark(); b && make_benchmark(*b).dimension() != data.dimension())
    throw ConfigError("data dimension does not match system " + cfg.system);

  report.basis = build_basis(data.dimension(), cfg.degree);
  report.labels = report.basis.labels(data.names);
  const FeatureMatrix features = evaluate_features(report.basis, data);
  const std::size_t n = data.dimension();

  std::vector<std::vector<double>> targets(n);
  for (std::size_t eq = 0; eq < n; ++eq) targets[eq] = report.derivatives.values.column(eq);
  report.equations.resize(n);
  const unsigned workers = detail::worker_count(cfg.threads, n);
  if (workers <= 1) {
    for (std::size_t eq = 0; eq < n; ++eq) report.equations[eq] = detail::fit_equation(cfg, features, targets[eq], dt, eq);
  } else {
    for (std::size_t first = 0; first < n; first += workers) {
      std::vector<std::future<EquationFit>> jobs;
      for (std::size_t eq = first; eq < std::min<std::size_t>(n, first + workers); ++eq)
        jobs.push_back(std::async(std::launch::async, [&, eq] {
          return detail::fit_equation(cfg, features, targets[eq], dt, eq);
        }));
      for (std::size_t k = 0; k < jobs.size(); ++k) report.equations[first + k] = jobs[k].get();
    }
  }

  report.coefficients = CoefficientMatrix(report.basis.size(), n);
  for (std::size_t eq = 0; eq < n; ++eq) {
    report.equations[eq].name = data.names[eq];
    report.coefficients.set_column(eq, report.equations[eq].coefficients);
  }
  report.sparsity = sparsity_report(report.basis, report.coefficients, 0.0, data.names);

  Matrix predicted(data.size(), n);
  for (std::size_t eq = 0; eq < n; ++eq)
    predicted.set_column(eq, predict(features, report.equations[eq].coefficients));
  report.derivative_metrics = compare(report.derivatives.values, predicted, dt);

  if (cfg.resimulate) {
    try {
      report.resimulated = resimulate(report.basis, report.coefficients, data, cfg.integrator);
      report.resimulation_metrics = compare(data.states, report.resimulated->states, dt);
    } catch (const IntegrationError& e) {
      report.resimulation_error = e.what();
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

/// Human-readable report followed by a `[results]` key=value block.
inline void write_report(std::ostream& out, const RunReport& r) {
  const auto& cfg = r.config;
  out << "gadyn fit report\n\n";
  out << "system        " << cfg.system << (cfg.system == "csv" ? " (" + cfg.data_path.string() + ")" : "") << '\n';
  out << "mode          " << to_string(cfg.mode) << '\n';
  out << "samples       " << r.data.size() << " (dt " << detail::format_real(r.data.spacing()) << ")\n";
  out << "derivatives   " << to_string(cfg.derivatives) << '\n';
  out << "basis         degree " << cfg.degree << ", " << r.basis.size() << " terms\n";
  out << "seed          " << cfg.seed << '\n';
  if (cfg.mode == FitMode::fixed)
    out << "budget        " << cfg.ga.population_size << " x " << cfg.ga.generations << " per equation, limits +/-"
        << detail::format_real(cfg.search_limit) << '\n';
  else
    out << "budget        " << cfg.dynamic.outer_iterations << " x " << cfg.dynamic.inner_population << " x "
        << cfg.dynamic.inner_generations << " per equation\n";
  out << "wall clock    " << detail::fmt("%.1f s", r.wall_seconds) << "\n\n";

  out << "Recovered model\n";
  for (const auto& e : r.sparsity.equations) out << "  " << e << '\n';
  out << "\nDerivative fit\n";
  out << "  eq        ISE            MSE            R2          terms  evaluations\n";
  for (std::size_t eq = 0; eq < r.equations.size(); ++eq) {
    const auto& m = r.derivative_metrics.equations[eq];
    out << "  d" << r.equations[eq].name << "/dt" << std::string(r.equations[eq].name.size() < 4 ? 4 - r.equations[eq].name.size() : 0, ' ')
        << detail::fmt("%14.6e", m.ise) << ' ' << detail::fmt("%14.6e", m.mse_paper) << ' '
        << detail::fmt("%12.8f", m.r2) << ' ' << detail::fmt("%6.0f", double(r.sparsity.support_labels(eq).size()))
        << "  " << r.equations[eq].evaluations << '\n';
  }
  out << "\nResimulation\n";
  if (r.resimulation_metrics) {
    for (std::size_t eq = 0; eq < r.resimulation_metrics->equations.size(); ++eq) {
      const auto& m = r.resimulation_metrics->equations[eq];
      out << "  " << r.data.names[eq] << "  ISE " << detail::fmt("%.6e", m.ise) << "  R2 " << detail::fmt("%.8f", m.r2)
          << '\n';
    }
  } else if (!r.resimulation_error.empty()) {
    out << "  failed: " << r.resimulation_error << '\n';
  } else {
    out << "  skipped\n";
  }
  out << "\nStatus: " << (r.converged() ? "converged" : "NOT converged (derivative R2 < 0.99)") << "\n\n";

  out << "[results]\n";
  out << "system=" << cfg.system << '\n';
  out << "mode=" << to_string(cfg.mode) << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "converged=" << (r.converged() ? "true" : "false") << '\n';
  out << "derivative.ise=" << detail::format_real(r.derivative_metrics.ise) << '\n';
  out << "derivative.mse=" << detail::format_real(r.derivative_metrics.mse_paper) << '\n';
  out << "derivative.r2=" << detail::format_real(r.derivative_metrics.r2) << '\n';
  for (std::size_t eq = 0; eq < r.equations.size(); ++eq) {
    const std::string k = "eq" + std::to_string(eq + 1);
    const auto& m = r.derivative_metrics.equations[eq];
    out << k << ".state=" << r.equations[eq].name << '\n';
    out << k << ".ise=" << detail::format_real(m.ise) << '\n';
    out << k << ".mse=" << detail::format_real(m.mse_paper) << '\n';
    out << k << ".r2=" << detail::format_real(m.r2) << '\n';
    out << k << ".fitness=" << detail::format_real(r.equations[eq].fitness) << '\n';
    out << k << ".evaluations=" << r.equations[eq].evaluations << '\n';
    out << k << ".terms=" << r.sparsity.support_labels(eq).size() << '\n';
    out << k << ".seconds=" << detail::fmt("%.3f", r.equations[eq].seconds) << '\n';
  }
  out << "evaluations=" << r.evaluations() << '\n';
  if (r.resimulation_metrics) {
    out << "resimulation.ise=" << detail::format_real(r.resimulation_metrics->ise) << '\n';
    out << "resimulation.r2=" << detail::format_real(r.resimulation_metrics->r2) << '\n';
  } else {
    out << "resimulation.ise=nan\nresimulation.r2=nan\n";
  }
  out << "wall_seconds=" << detail::fmt("%.3f", r.wall_seconds) << '\n';
}

/// Fixed-mode GA history: generation,best_fitness.
inline void write_ga_history(std::ostream& out, const std::vector<double>& history) {
  out << "generation,best_fitness\n";
  for (std::size_t g = 0; g < history.size(); ++g) out << g + 1 << ',' << detail::format_real(history[g]) << '\n';
}

/// Writes report.txt, model.csv, config.ini, data.csv, derivatives.csv,
/// history_<state>.csv and, when available, resimulated.csv into `dir`.
inline void write_run_outputs(const RunReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = detail::open_for_write(dir / "report.txt");
    write_report(out, r);
  }
  {
    auto out = detail::open_for_write(dir / "config.ini");
    write_config(out, r.config);
  }
  write_model_csv(dir / "model.csv", r.basis, r.coefficients, r.data.names);
  write_csv(dir / "data.csv", r.data);
  write_csv(dir / "derivatives.csv", r.derivatives, r.data.names);
  for (const auto& e : r.equations) {
    auto out = detail::open_for_write(dir / ("history_" + e.name + ".csv"));
    if (e.dynamic)
      write_dynamic_history(out, *e.dynamic, r.labels);
    else
      write_ga_history(out, e.ga_history);
  }
  if (r.resimulated) write_csv(dir / "resimulated.csv", *r.resimulated);
}

}  // namespace gadyn
