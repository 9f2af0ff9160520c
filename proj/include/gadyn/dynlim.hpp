#pragma once

// Dynamic search limits around the GA.
//
// Each outer iteration runs one short GA inside the current per-coefficient
// limits and then, using that GA's best individual:
//   1. adjust_limits    |g_j| > 0.9 L_j  ->  L_j *= 1.1, otherwise L_j *= 0.9
//   2. apply_threshold  |g_j| < 1e-4     ->  g_j frozen at 0; all remaining
//                                            limits reset to their initial value
//   3. step_stagnation  after f iterations without improvement, tentatively
//                       remove the smallest coefficient; keep the removal only
//                       if the best fitness during the next f iterations beats
//                       the pre-removal best, otherwise restore and try the
//                       next smallest.
// Initial limits are max|v| / max|theta_j| per term. The reported model is the
// best individual seen since the frozen set last changed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gadyn/ga.hpp"
#include "gadyn/library.hpp"
#include "gadyn/rng.hpp"
#include "gadyn/signal.hpp"

namespace gadyn {

struct DynConfig {
  std::size_t outer_iterations = 2000;
  std::size_t inner_population = 100;
  std::size_t inner_generations = 100;
  double threshold = 1e-4;
  std::size_t stagnation_f = 20;
  double expand_trigger = 0.9;
  double expand_factor = 1.1;
  double shrink_factor = 0.9;
  // Operator settings of every inner GA.
  double mutation_prob = 0.10;
  double elitism_frac = 0.10;
  double pressure_frac = 0.70;
  /// Relative decrease of the best fitness that counts as progress.
  double improvement_tol = 1e-12;
  /// Inject the incumbent into each inner GA's initial population. Off by
  /// default: fresh GAs keep the limit updates exploratory.
  bool warm_start = false;

  [[nodiscard]] GAConfig inner_ga(std::uint64_t seed) const {
    GAConfig g;
    g.population_size = inner_population;
    g.generations = inner_generations;
    g.mutation_prob = mutation_prob;
    g.elitism_frac = elitism_frac;
    g.pressure_frac = pressure_frac;
    g.rng_seed = seed;
    return g;
  }

  [[nodiscard]] std::uint64_t evaluations() const noexcept {
    return static_cast<std::uint64_t>(outer_iterations) * inner_population * inner_generations;
  }

  void validate() const {
    if (outer_iterations < 1) throw std::invalid_argument("dynamic: outer_iterations must be >= 1");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0 && expand_factor > 1.0))
      throw std::invalid_argument("dynamic: need 0 < shrink_factor < 1 < expand_factor");
    if (!(expand_trigger > 0.0 && expand_trigger < 1.0))
      throw std::invalid_argument("dynamic: expand_trigger must be in (0, 1)");
    if (!(threshold > 0.0)) throw std::invalid_argument("dynamic: threshold must be > 0");
    if (stagnation_f < 1) throw std::invalid_argument("dynamic: stagnation_f must be >= 1");
    inner_ga(0).validate();
  }
};

/// Per-coefficient limits and the frozen-zero mask for one equation.
struct LimitState {
  std::vector<double> initial_upper;
  std::vector<double> current_upper;
  FrozenMask frozen;
  /// Best individual consistent with the current mask (frozen genes are 0).
  /// Its fitness is +inf after a gene was zeroed, until the next GA
  /// re-evaluates it.
  Individual incumbent;
  std::size_t stagnation_counter = 0;
  /// Best fitness since the last change of the frozen set or limit reset.
  double record_fitness = std::numeric_limits<double>::infinity();

  [[nodiscard]] GeneBounds bounds() const { return GeneBounds{current_upper}; }
  [[nodiscard]] std::size_t active_count() const {
    return static_cast<std::size_t>(std::count(frozen.begin(), frozen.end(), false));
  }

  void reset_limits() {
    for (std::size_t j = 0; j < current_upper.size(); ++j)
      if (!frozen[j]) current_upper[j] = initial_upper[j];
  }

  void restart_stagnation() {
    stagnation_counter = 0;
    record_fitness = std::numeric_limits<double>::infinity();
  }
};

/// Tentative removal of one coefficient plus what is needed to undo it.
struct EliminationProbe {
  bool active = false;
  std::size_t removed_index = 0;
  double pre_best_fitness = std::numeric_limits<double>::infinity();
  std::size_t probation_left = 0;
  double probation_best = std::numeric_limits<double>::infinity();
  /// Remaining candidates, ascending |coefficient| at probe start.
  std::vector<std::size_t> candidates;
  Individual saved_incumbent;
  FrozenMask saved_frozen;
};

inline constexpr double kDegenerateFeature = 1e-12;

/// Initial limit of term j: max|v| / max|theta_j|. Terms that vanish on the
/// data (max|theta_j| < 1e-12) start frozen.
[[nodiscard]] inline LimitState init_limits(std::span<const double> target, const FeatureMatrix& features) {
  if (target.size() != features.rows()) throw std::invalid_argument("init_limits: sample count mismatch");
  double vmax = 0.0;
  for (double v : target) vmax = std::max(vmax, std::abs(v));
  if (!(vmax > 0.0) || !std::isfinite(vmax)) throw std::invalid_argument("init_limits: target signal is identically zero");

  const std::size_t p = features.cols();
  LimitState s;
  s.initial_upper.assign(p, 0.0);
  s.frozen.assign(p, false);
  std::vector<double> fmax(p, 0.0);
  for (std::size_t k = 0; k < features.rows(); ++k) {
    const auto row = features.row(k);
    for (std::size_t j = 0; j < p; ++j) fmax[j] = std::max(fmax[j], std::abs(row[j]));
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (fmax[j] < kDegenerateFeature)
      s.frozen[j] = true;
    else
      s.initial_upper[j] = vmax / fmax[j];
  }
  s.current_upper = s.initial_upper;
  s.incumbent.genes.assign(p, 0.0);
  s.incumbent.fitness = std::numeric_limits<double>::infinity();
  return s;
}

/// Expand by expand_factor when |g_j| > expand_trigger * L_j (strictly),
/// shrink by shrink_factor otherwise.
inline void adjust_limits(LimitState& state, const Individual& best, const DynConfig& cfg) {
  for (std::size_t j = 0; j < state.current_upper.size(); ++j) {
    if (state.frozen[j]) continue;
    double& upper = state.current_upper[j];
    upper *= std::abs(best.genes[j]) > cfg.expand_trigger * upper ? cfg.expand_factor : cfg.shrink_factor;
  }
}

/// Freezes every active gene with |g_j| < threshold. If anything froze, the
/// remaining limits return to their initial values. Returns the number of
/// genes frozen by this call.
inline std::size_t apply_threshold(LimitState& state, const Individual& best, const DynConfig& cfg) {
  std::size_t newly = 0;
  for (std::size_t j = 0; j < state.frozen.size(); ++j) {
    if (state.frozen[j] || !(std::abs(best.genes[j]) < cfg.threshold)) continue;
    state.frozen[j] = true;
    state.incumbent.genes[j] = 0.0;
    ++newly;
  }
  if (newly > 0) {
    state.incumbent.fitness = std::numeric_limits<double>::infinity();
    state.reset_limits();
    state.restart_stagnation();
  }
  return newly;
}

enum class StagnationEvent { none, probe_started, committed, rolled_back, exhausted };

[[nodiscard]] inline const char* to_string(StagnationEvent e) noexcept {
  switch (e) {
    case StagnationEvent::none: return "none";
    case StagnationEvent::probe_started: return "probe_started";
    case StagnationEvent::committed: return "committed";
    case StagnationEvent::rolled_back: return "rolled_back";
    case StagnationEvent::exhausted: return "exhausted";
  }
  return "?";
}

namespace detail {

inline void start_removal(LimitState& state, EliminationProbe& probe, const DynConfig& cfg) {
  const std::size_t j = probe.candidates.front();
  probe.candidates.erase(probe.candidates.begin());
  probe.removed_index = j;
  probe.probation_left = cfg.stagnation_f;
  probe.probation_best = std::numeric_limits<double>::infinity();
  state.frozen[j] = true;
  state.incumbent.genes[j] = 0.0;
  state.incumbent.fitness = std::numeric_limits<double>::infinity();
  state.reset_limits();
  state.restart_stagnation();
}

}  // namespace detail

/// Once per outer iteration, with that iteration's best fitness.
inline StagnationEvent step_stagnation(LimitState& state, EliminationProbe& probe, double iteration_fitness,
                                       const DynConfig& cfg) {
  const bool improved = std::isfinite(iteration_fitness) &&
                        (!std::isfinite(state.record_fitness) ||
                         iteration_fitness < state.record_fitness * (1.0 - cfg.improvement_tol));
  if (improved) {
    state.record_fitness = iteration_fitness;
    state.stagnation_counter = 0;
  } else {
    ++state.stagnation_counter;
  }

  if (probe.active) {
    probe.probation_best = std::min(probe.probation_best, iteration_fitness);
    if (--probe.probation_left > 0) return StagnationEvent::none;
    if (probe.probation_best < probe.pre_best_fitness) {
      probe.active = false;
      state.stagnation_counter = 0;
      return StagnationEvent::committed;
    }
    state.incumbent = probe.saved_incumbent;
    state.frozen = probe.saved_frozen;
    if (!probe.candidates.empty()) {
      detail::start_removal(state, probe, cfg);
      return StagnationEvent::rolled_back;
    }
    probe.active = false;
    state.record_fitness = probe.pre_best_fitness;
    state.stagnation_counter = 0;
    return StagnationEvent::exhausted;
  }

  if (state.stagnation_counter < cfg.stagnation_f || state.active_count() < 2) return StagnationEvent::none;

  probe = EliminationProbe{};
  probe.active = true;
  probe.pre_best_fitness = state.record_fitness;
  probe.saved_incumbent = state.incumbent;
  probe.saved_frozen = state.frozen;
  for (std::size_t j = 0; j < state.frozen.size(); ++j)
    if (!state.frozen[j]) probe.candidates.push_back(j);
  const auto& genes = state.incumbent.genes;
  std::stable_sort(probe.candidates.begin(), probe.candidates.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(genes[a]) < std::abs(genes[b]); });
  detail::start_removal(state, probe, cfg);
  return StagnationEvent::probe_started;
}

struct IterationRecord {
  double best_fitness = 0.0;            // inner GA best, before any freezing
  double incumbent_fitness = 0.0;       // best so far under the same frozen set
  std::vector<double> best_genes;       // inner GA best
  std::vector<double> upper;            // limits after this iteration's updates
  FrozenMask frozen;                    // mask after this iteration's updates
  std::size_t newly_frozen = 0;
  StagnationEvent stagnation = StagnationEvent::none;
};

struct DynamicResult {
  Individual best;
  FrozenMask frozen;
  std::vector<IterationRecord> iterations;
  std::vector<double> initial_upper;
  std::uint64_t evaluations = 0;

  [[nodiscard]] std::vector<double> fitness_history() const {
    std::vector<double> out;
    for (const auto& it : iterations) out.push_back(it.best_fitness);
    return out;
  }
};

/// Runs the outer loop for one equation. `fitness` must map genes to the ISE
/// of the equation; the seed drives one generator that seeds every inner GA.
/// Search evaluations total outer_iterations * inner_population *
/// inner_generations; if the run ends mid-probe the probe is resolved as at
/// the end of its probation, and a final incumbent whose fitness went stale
/// is re-scored once (not counted as a search evaluation).
template <class Fitness>
[[nodiscard]] DynamicResult run_dynamic(Fitness&& fitness, std::span<const double> target,
                                        const FeatureMatrix& features, const DynConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  LimitState state = init_limits(target, features);
  EliminationProbe probe;
  Rng master(seed);

  DynamicResult result;
  result.initial_upper = state.initial_upper;
  result.iterations.reserve(cfg.outer_iterations);
  for (std::size_t it = 0; it < cfg.outer_iterations; ++it) {
    const GAConfig ga_cfg = cfg.inner_ga(master.next());
    const GaResult ga = run_ga(fitness, state.bounds(), state.frozen, ga_cfg, (it == 0 || !cfg.warm_start) ? nullptr : &state.incumbent);
    result.evaluations += ga.evaluations;
    if (ga.best.fitness < state.incumbent.fitness) state.incumbent = ga.best;

    IterationRecord rec;
    rec.best_fitness = ga.best.fitness;
    rec.best_genes = ga.best.genes;
    rec.incumbent_fitness = state.incumbent.fitness;
    adjust_limits(state, ga.best, cfg);
    rec.newly_frozen = apply_threshold(state, ga.best, cfg);
    rec.stagnation = step_stagnation(state, probe, ga.best.fitness, cfg);
    rec.upper = state.current_upper;
    rec.frozen = state.frozen;
    result.iterations.push_back(std::move(rec));
  }

  if (probe.active && !(probe.probation_best < probe.pre_best_fitness)) {
    state.incumbent = probe.saved_incumbent;
    state.frozen = probe.saved_frozen;
  }
  if (!std::isfinite(state.incumbent.fitness))
    state.incumbent.fitness = fitness(std::span<const double>(state.incumbent.genes));
  result.best = state.incumbent;
  result.frozen = state.frozen;
  return result;
}

/// Long-format trace: iteration,term,upper_limit,best_value,best_fitness.
inline void write_dynamic_history(std::ostream& out, const DynamicResult& result,
                                  const std::vector<std::string>& labels) {
  out << "iteration,term,upper_limit,best_value,best_fitness\n";
  for (std::size_t it = 0; it < result.iterations.size(); ++it) {
    const auto& rec = result.iterations[it];
    for (std::size_t j = 0; j < labels.size(); ++j)
      out << it + 1 << ',' << labels[j] << ',' << detail::format_double(rec.upper[j]) << ','
          << detail::format_double(rec.best_genes[j]) << ',' << detail::format_double(rec.best_fitness) << '\n';
  }
}

}  // namespace gadyn
