#include <gtest/gtest.h>

#include <cstring>

#include "gadyn/ga.hpp"

using namespace gadyn;

namespace {

struct Sphere {
  std::vector<double> centre;
  double operator()(std::span<const double> g) const {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += (g[j] - centre[j]) * (g[j] - centre[j]);
    return s;
  }
};

GAConfig small(std::uint64_t seed, std::size_t P = 40, std::size_t G = 50) {
  GAConfig c;
  c.population_size = P;
  c.generations = G;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST(Ga, DefaultsAreTheBaselineSettings) {
  const GAConfig c;
  EXPECT_EQ(c.population_size, 10000u);
  EXPECT_EQ(c.generations, 2000u);
  EXPECT_EQ(c.evaluations(), 20'000'000u);
  EXPECT_EQ(c.elite_count(), 1000u);
  EXPECT_EQ(c.pool_size(), 7000u);
}

TEST(Ga, SpendsExactlyPopulationTimesGenerations) {
  std::uint64_t calls = 0;
  auto f = [&](std::span<const double> g) {
    ++calls;
    return g[0] * g[0];
  };
  const auto r = run_ga(f, GeneBounds::symmetric(3, 1.0), FrozenMask(3, false), small(1, 33, 17));
  EXPECT_EQ(r.evaluations, 33u * 17u);
  EXPECT_EQ(calls, 33u * 17u);
  EXPECT_EQ(r.history.size(), 17u);
}

TEST(Ga, HistoryNeverRises) {
  const Sphere f{{0.3, -1.2, 2.0, 0.0}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = run_ga(f, GeneBounds::symmetric(4, 3.0), FrozenMask(4, false), small(seed));
    for (std::size_t g = 1; g < r.history.size(); ++g) EXPECT_LE(r.history[g], r.history[g - 1]);
    EXPECT_EQ(r.best.fitness, r.history.back());
  }
}

TEST(Ga, ElitesSurviveBitExactly) {
  const Sphere f{{1.0, 2.0, -1.0}};
  const auto cfg = small(3, 30, 40);
  std::vector<std::vector<double>> prev;
  std::size_t checked = 0;
  auto observe = [&](std::size_t, const Population& pop, const std::vector<std::size_t>& order) {
    for (const auto& e : prev) {
      bool found = false;
      for (const auto& ind : pop)
        found = found || std::memcmp(ind.genes.data(), e.data(), e.size() * sizeof(double)) == 0;
      EXPECT_TRUE(found);
      ++checked;
    }
    prev.clear();
    for (std::size_t i = 0; i < cfg.elite_count(); ++i) prev.push_back(pop[order[i]].genes);
  };
  (void)run_ga(f, GeneBounds::symmetric(3, 4.0), FrozenMask(3, false), cfg, nullptr, observe);
  EXPECT_EQ(checked, 39u * cfg.elite_count());
}

TEST(Ga, GenesStayInBoundsAndFrozenGenesStayZero) {
  const Sphere f{{5.0, 5.0, 5.0, 5.0}};
  const GeneBounds bounds{{1.0, 0.5, 2.0, 0.25}};
  const FrozenMask frozen{false, true, false, true};
  auto observe = [&](std::size_t, const Population& pop, const std::vector<std::size_t>&) {
    for (const auto& ind : pop)
      for (std::size_t j = 0; j < 4; ++j) {
        if (frozen[j]) {
          ASSERT_EQ(ind.genes[j], 0.0);
        } else {
          ASSERT_GE(ind.genes[j], -bounds.upper[j]);
          ASSERT_LE(ind.genes[j], bounds.upper[j]);
        }
      }
  };
  const auto r = run_ga(f, bounds, frozen, small(2), nullptr, observe);
  // Best pushes against the upper bounds of the active genes.
  EXPECT_GT(r.best.genes[0], 0.9);
  EXPECT_GT(r.best.genes[2], 1.8);
}

TEST(Ga, SameSeedSameResult) {
  const Sphere f{{0.1, 0.2, 0.3}};
  const auto a = run_ga(f, GeneBounds::symmetric(3, 1.0), FrozenMask(3, false), small(42));
  const auto b = run_ga(f, GeneBounds::symmetric(3, 1.0), FrozenMask(3, false), small(42));
  const auto c = run_ga(f, GeneBounds::symmetric(3, 1.0), FrozenMask(3, false), small(43));
  EXPECT_EQ(a.best.genes, b.best.genes);
  EXPECT_EQ(a.history, b.history);
  EXPECT_NE(a.history, c.history);
}

TEST(Ga, ConvergesOnASphere) {
  const Sphere f{{0.7, -0.4, 1.5}};
  const auto r = run_ga(f, GeneBounds::symmetric(3, 2.0), FrozenMask(3, false), small(9, 200, 200));
  EXPECT_LT(r.best.fitness, 1e-3);
}

TEST(Ga, WarmStartIsClampedAndMasked) {
  const Sphere f{{0.0, 0.0}};
  Individual seed{{5.0, 0.3}, 0.0};
  std::vector<double> first;
  auto observe = [&](std::size_t gen, const Population& pop, const std::vector<std::size_t>&) {
    if (gen == 0) first = pop[0].genes;
  };
  (void)run_ga(f, GeneBounds{{1.0, 1.0}}, FrozenMask{false, true}, small(1), &seed, observe);
  EXPECT_EQ(first, (std::vector<double>{1.0, 0.0}));
}

TEST(Ga, NanFitnessRanksLast) {
  auto f = [](std::span<const double> g) { return g[0] > 0.0 ? std::nan("") : -g[0]; };
  const auto r = run_ga(f, GeneBounds::symmetric(1, 1.0), FrozenMask(1, false), small(4));
  EXPECT_LE(r.best.genes[0], 0.0);
  EXPECT_TRUE(std::isfinite(r.best.fitness));
}

TEST(Ga, RouletteFavoursLowFitness) {
  const std::vector<double> fit{1.0, 2.0, 4.0};
  const RouletteWheel w(fit);
  // Weights worst - f + eps: about 3, 2, 0.
  EXPECT_NEAR(w.probability(0), 0.6, 1e-9);
  EXPECT_NEAR(w.probability(1), 0.4, 1e-9);
  EXPECT_LT(w.probability(2), 1e-9);
  const RouletteWheel flat(std::vector<double>{3.0, 3.0});
  EXPECT_DOUBLE_EQ(flat.probability(0), 0.5);

  Rng rng(1);
  std::size_t hits0 = 0;
  for (int i = 0; i < 20000; ++i) hits0 += w.spin(rng) == 0;
  EXPECT_NEAR(hits0 / 20000.0, 0.6, 0.02);
}

TEST(Ga, SelectionStaysInThePressurePool) {
  Population pop(10);
  for (std::size_t i = 0; i < 10; ++i) pop[i] = Individual{{double(i)}, double(9 - i)};
  Rng rng(3);
  for (int k = 0; k < 2000; ++k) EXPECT_GE(select_parent(pop, 0.7, rng).genes[0], 3.0);  // fitness <= 6
}

TEST(Ga, SinglePointCrossover) {
  const Individual a{{1, 2, 3, 4, 5}, 0.0};
  const Individual b{{-1, -2, -3, -4, -5}, 0.0};
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [c1, c2] = crossover(a, b, rng);
    std::size_t cut = 0;
    while (cut < 5 && c1.genes[cut] == a.genes[cut]) ++cut;
    ASSERT_GE(cut, 1u);
    ASSERT_LE(cut, 4u);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(c1.genes[j], j < cut ? a.genes[j] : b.genes[j]);
      EXPECT_EQ(c2.genes[j], j < cut ? b.genes[j] : a.genes[j]);
    }
  }
}

TEST(Ga, MutationRate) {
  Rng rng(11);
  std::size_t changed = 0;
  const std::size_t trials = 20000;
  for (std::size_t t = 0; t < trials; ++t) {
    Individual ind{{7.0, 7.0}, 0.0};
    mutate(ind, GeneBounds::symmetric(2, 1.0), FrozenMask{false, true}, 0.1, rng);
    changed += ind.genes[0] != 7.0;
    ASSERT_EQ(ind.genes[1], 7.0);
    ASSERT_TRUE(std::abs(ind.genes[0]) <= 1.0 || ind.genes[0] == 7.0);
  }
  EXPECT_NEAR(double(changed) / trials, 0.1, 0.01);
}

TEST(Ga, RejectsBadConfigurations) {
  const Sphere f{{0.0}};
  auto cfg = small(1);
  cfg.population_size = 1;
  EXPECT_THROW((void)run_ga(f, GeneBounds::symmetric(1, 1.0), FrozenMask(1, false), cfg), std::invalid_argument);
  cfg = small(1);
  cfg.mutation_prob = 1.5;
  EXPECT_THROW((void)run_ga(f, GeneBounds::symmetric(1, 1.0), FrozenMask(1, false), cfg), std::invalid_argument);
  cfg = small(1, 5, 5);  // 10% of 5 rounds to zero elites
  EXPECT_THROW((void)run_ga(f, GeneBounds::symmetric(1, 1.0), FrozenMask(1, false), cfg), std::invalid_argument);
  EXPECT_THROW((void)run_ga(f, GeneBounds::symmetric(1, -1.0), FrozenMask(1, false), small(1)), std::invalid_argument);
  EXPECT_THROW((void)run_ga(f, GeneBounds::symmetric(2, 1.0), FrozenMask(1, false), small(1)), std::invalid_argument);
}
