#pragma once

// Real-coded genetic algorithm (minimization): uniform random initial
// population, roulette selection restricted to the best `pressure_frac` of
// the population, single-point crossover producing two children, uniform
// resampling mutation, and elitism.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gadyn/rng.hpp"

namespace gadyn {

/// Symmetric search box: gene j lies in [-upper[j], upper[j]].
struct GeneBounds {
  std::vector<double> upper;

  [[nodiscard]] static GeneBounds symmetric(std::size_t p, double limit) {
    return GeneBounds{std::vector<double>(p, limit)};
  }

  [[nodiscard]] std::size_t size() const noexcept { return upper.size(); }
  [[nodiscard]] double lower(std::size_t j) const { return -upper[j]; }

  void validate() const {
    for (double u : upper)
      if (!std::isfinite(u) || u < 0.0) throw std::invalid_argument("GeneBounds: upper limits must be finite and >= 0");
  }
};

/// true = gene fixed at exactly zero and excluded from the search.
using FrozenMask = std::vector<bool>;

struct Individual {
  std::vector<double> genes;
  double fitness = std::numeric_limits<double>::infinity();  // lower is better
};

using Population = std::vector<Individual>;

/// Defaults are the fixed-limit baseline settings.
struct GAConfig {
  std::size_t population_size = 10'000;
  std::size_t generations = 2'000;
  double mutation_prob = 0.10;  // per gene
  double elitism_frac = 0.10;
  double pressure_frac = 0.70;
  std::uint64_t rng_seed = 1;

  [[nodiscard]] std::size_t elite_count() const noexcept {
    return static_cast<std::size_t>(std::floor(elitism_frac * static_cast<double>(population_size) + 1e-9));
  }
  /// Size of the mating pool, ceil(pressure_frac * population_size).
  [[nodiscard]] std::size_t pool_size() const noexcept {
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(pressure_frac * static_cast<double>(population_size) - 1e-9)));
  }
  [[nodiscard]] std::uint64_t evaluations() const noexcept {
    return static_cast<std::uint64_t>(population_size) * generations;
  }

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("GA: population_size must be >= 2");
    if (generations < 1) throw std::invalid_argument("GA: generations must be >= 1");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw std::invalid_argument("GA: mutation_prob must be in [0, 1]");
    if (!(elitism_frac >= 0.0 && elitism_frac < 1.0) || elite_count() < 1)
      throw std::invalid_argument("GA: elitism_frac * population_size must be >= 1 and elitism_frac < 1");
    if (!(pressure_frac > 0.0 && pressure_frac <= 1.0)) throw std::invalid_argument("GA: pressure_frac must be in (0, 1]");
  }
};

/// Uniform i.i.d. genes within bounds; frozen genes are 0.
[[nodiscard]] inline Population init_population(const GeneBounds& bounds, const FrozenMask& frozen,
                                                std::size_t size, Rng& rng) {
  if (frozen.size() != bounds.size()) throw std::invalid_argument("init_population: mask/bounds size mismatch");
  Population pop(size);
  for (auto& ind : pop) {
    ind.genes.resize(bounds.size());
    for (std::size_t j = 0; j < bounds.size(); ++j)
      ind.genes[j] = frozen[j] ? 0.0 : rng.uniform(bounds.lower(j), bounds.upper[j]);
  }
  return pop;
}

[[nodiscard]] inline Population init_population(const GeneBounds& bounds, const FrozenMask& frozen,
                                                const GAConfig& config) {
  Rng rng(config.rng_seed);
  return init_population(bounds, frozen, config.population_size, rng);
}

/// Roulette over a mating pool given best-first. Member i gets weight
/// (f_worst - f_i + eps), eps = 1e-12 * (1 + |f_worst|), so equal fitnesses
/// give uniform selection and the worst member keeps a tiny chance.
class RouletteWheel {
 public:
  explicit RouletteWheel(std::span<const double> pool_fitness) : cumulative_(pool_fitness.size()) {
    if (pool_fitness.empty()) throw std::invalid_argument("RouletteWheel: empty pool");
    double worst = -std::numeric_limits<double>::infinity();
    for (double f : pool_fitness)
      if (std::isfinite(f)) worst = std::max(worst, f);
    const bool any_finite = std::isfinite(worst);
    const double eps = any_finite ? 1e-12 * (1.0 + std::abs(worst)) : 1.0;
    double total = 0.0;
    for (std::size_t i = 0; i < pool_fitness.size(); ++i) {
      const double f = pool_fitness[i];
      total += (any_finite && std::isfinite(f)) ? (worst - f) + eps : eps;
      cumulative_[i] = total;
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return cumulative_.size(); }

  [[nodiscard]] double probability(std::size_t i) const {
    const double prev = i == 0 ? 0.0 : cumulative_[i - 1];
    return (cumulative_[i] - prev) / cumulative_.back();
  }

  [[nodiscard]] std::size_t spin(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

namespace detail {

inline double sanitize(double f) { return std::isnan(f) ? std::numeric_limits<double>::infinity() : f; }

/// Indices of `pop` ordered best-first; ties keep population order.
inline void rank(const Population& pop, std::vector<std::size_t>& order) {
  order.resize(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pop[a].fitness < pop[b].fitness; });
}

struct NoObserver {
  void operator()(std::size_t, const Population&, const std::vector<std::size_t>&) const noexcept {}
};

inline void crossover_into(const Individual& a, const Individual& b, Rng& rng, Individual& c1, Individual& c2) {
  const std::size_t p = a.genes.size();
  c1.genes.resize(p);
  c2.genes.resize(p);
  if (p < 2) {
    c1.genes = a.genes;
    c2.genes = b.genes;
    return;
  }
  const std::size_t cut = 1 + static_cast<std::size_t>(rng.index(p - 1));  // in [1, p-1]
  std::copy(a.genes.begin(), a.genes.begin() + cut, c1.genes.begin());
  std::copy(b.genes.begin() + cut, b.genes.end(), c1.genes.begin() + cut);
  std::copy(b.genes.begin(), b.genes.begin() + cut, c2.genes.begin());
  std::copy(a.genes.begin() + cut, a.genes.end(), c2.genes.begin() + cut);
}

}  // namespace detail

/// Roulette pick from the best ceil(pressure_frac * size) individuals.
[[nodiscard]] inline const Individual& select_parent(const Population& population, double pressure_frac, Rng& rng) {
  if (population.empty()) throw std::invalid_argument("select_parent: empty population");
  std::vector<std::size_t> order;
  detail::rank(population, order);
  GAConfig shape;
  shape.population_size = population.size();
  shape.pressure_frac = pressure_frac;
  const std::size_t pool = std::min(shape.pool_size(), population.size());
  std::vector<double> fit(pool);
  for (std::size_t i = 0; i < pool; ++i) fit[i] = population[order[i]].fitness;
  return population[order[RouletteWheel(fit).spin(rng)]];
}

/// Cut k uniform in [1, p-1]; child_a = a[0,k) + b[k,p), child_b the
/// complement. For p < 2 the children are copies of the parents.
[[nodiscard]] inline std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, Rng& rng) {
  if (a.genes.size() != b.genes.size()) throw std::invalid_argument("crossover: parents differ in length");
  std::pair<Individual, Individual> children;
  detail::crossover_into(a, b, rng, children.first, children.second);
  return children;
}

/// Each non-frozen gene is redrawn uniformly within bounds with
/// probability `mutation_prob`.
inline void mutate(Individual& ind, const GeneBounds& bounds, const FrozenMask& frozen, double mutation_prob,
                   Rng& rng) {
  for (std::size_t j = 0; j < ind.genes.size(); ++j) {
    if (frozen[j]) continue;
    if (rng.bernoulli(mutation_prob)) ind.genes[j] = rng.uniform(bounds.lower(j), bounds.upper[j]);
  }
}

struct GaResult {
  Individual best;
  std::vector<double> history;  // best fitness after each generation
  std::uint64_t evaluations = 0;
};

/// Generation loop: evaluate every individual, record the best, then build
/// the next population from the elite (copied unchanged) plus mutated
/// crossover children of roulette-selected parents. Exactly
/// population_size * generations fitness evaluations.
///
/// `warm_start`, if given, replaces the first random individual after being
/// clamped to the bounds and zeroed on frozen genes. `observe(gen, pop,
/// order)` sees every evaluated generation; order[0] indexes its best.
template <class Fitness, class Observer = detail::NoObserver>
[[nodiscard]] GaResult run_ga(Fitness&& fitness, const GeneBounds& bounds, const FrozenMask& frozen,
                              const GAConfig& config, const Individual* warm_start = nullptr,
                              Observer observe = {}) {
  config.validate();
  bounds.validate();
  if (frozen.size() != bounds.size()) throw std::invalid_argument("run_ga: mask/bounds size mismatch");
  const std::size_t P = config.population_size;
  const std::size_t elites = config.elite_count();
  const std::size_t pool = config.pool_size();

  Rng rng(config.rng_seed);
  Population pop = init_population(bounds, frozen, P, rng);
  if (warm_start != nullptr) {
    if (warm_start->genes.size() != bounds.size()) throw std::invalid_argument("run_ga: warm start has wrong length");
    for (std::size_t j = 0; j < bounds.size(); ++j)
      pop[0].genes[j] = frozen[j] ? 0.0 : std::clamp(warm_start->genes[j], bounds.lower(j), bounds.upper[j]);
  }
  Population next(P);
  std::vector<std::size_t> order;
  std::vector<double> pool_fitness(pool);

  GaResult result;
  result.history.reserve(config.generations);
  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    for (auto& ind : pop) ind.fitness = detail::sanitize(fitness(std::span<const double>(ind.genes)));
    result.evaluations += P;

    detail::rank(pop, order);
    observe(gen, std::as_const(pop), std::as_const(order));
    const Individual& gen_best = pop[order[0]];
    if (gen_best.fitness < result.best.fitness || result.best.genes.empty()) result.best = gen_best;
    result.history.push_back(gen_best.fitness);
    if (gen + 1 == config.generations) break;

    for (std::size_t e = 0; e < elites; ++e) next[e] = pop[order[e]];
    for (std::size_t i = 0; i < pool; ++i) pool_fitness[i] = pop[order[i]].fitness;
    const RouletteWheel wheel(pool_fitness);
    for (std::size_t slot = elites; slot < P;) {
      const Individual& a = pop[order[wheel.spin(rng)]];
      const Individual& b = pop[order[wheel.spin(rng)]];
      Individual& c1 = next[slot];
      // The second child of an odd final pair is discarded.
      Individual scratch;
      Individual& c2 = slot + 1 < P ? next[slot + 1] : scratch;
      detail::crossover_into(a, b, rng, c1, c2);
      mutate(c1, bounds, frozen, config.mutation_prob, rng);
      ++slot;
      if (slot < P) {
        mutate(c2, bounds, frozen, config.mutation_prob, rng);
        ++slot;
      }
    }
    pop.swap(next);
  }
  return result;
}

}  // namespace gadyn
