#include <gtest/gtest.h>

#include <cmath>

#include "gadyn/matrix.hpp"
#include "gadyn/metrics.hpp"
#include "gadyn/rng.hpp"

using namespace gadyn;

TEST(Metrics, WorkedExamples) {
  const std::vector<double> zero{0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(ise(zero, std::vector<double>{1.0, 1.0, 1.0}, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(mse_paper(zero, std::vector<double>{1.0, 1.0, 2.0}), 6.0);
  EXPECT_DOUBLE_EQ(r2(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{1.0, 2.0, 2.0}), 0.5);
  EXPECT_DOUBLE_EQ(r2(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{1.0, 2.0, 3.0}), 1.0);
}

TEST(Metrics, IseIsTrapezoidal) {
  // Error 0..1 linear: squared error t^2 sampled at 0, 0.5, 1.
  const std::vector<double> a{0.0, 0.0, 0.0};
  const std::vector<double> e{0.0, 0.5, 1.0};
  EXPECT_DOUBLE_EQ(ise(a, e, 0.5), 0.5 * (0.5 * 0.0 + 0.25 + 0.5 * 1.0));
}

TEST(Metrics, ErrorsOnBadInput) {
  const std::vector<double> c{2.0, 2.0, 2.0};
  EXPECT_THROW((void)r2(c, c), UndefinedMetric);
  EXPECT_THROW((void)ise(c, std::vector<double>{1.0}, 0.1), std::invalid_argument);
  EXPECT_THROW((void)ise(c, c, 0.0), std::invalid_argument);
}

TEST(Metrics, CompareSumsIseAndTakesWorstR2) {
  Matrix a(3, 2), e(3, 2);
  for (std::size_t k = 0; k < 3; ++k) {
    a(k, 0) = double(k + 1);
    e(k, 0) = double(k + 1);
    a(k, 1) = double(k + 1);
  }
  e(0, 1) = 1.0;
  e(1, 1) = 2.0;
  e(2, 1) = 2.0;
  const auto rep = compare(a, e, 1.0);
  ASSERT_EQ(rep.equations.size(), 2u);
  EXPECT_DOUBLE_EQ(rep.equations[0].r2, 1.0);
  EXPECT_DOUBLE_EQ(rep.equations[1].r2, 0.5);
  EXPECT_DOUBLE_EQ(rep.r2, 0.5);
  EXPECT_DOUBLE_EQ(rep.ise, rep.equations[1].ise);
  EXPECT_DOUBLE_EQ(rep.mse_paper, 1.0);
}

TEST(Metrics, MatchBruteForceOnRandomSignals) {
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(10), e(10);
    for (std::size_t i = 0; i < 10; ++i) {
      a[i] = rng.uniform(-3.0, 3.0);
      e[i] = rng.uniform(-3.0, 3.0);
    }
    const double dt = rng.uniform(0.001, 2.0);
    double trap = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      const double l = a[i] - e[i], r = a[i + 1] - e[i + 1];
      trap += dt * (l * l + r * r) / 2.0;
    }
    double sse = 0.0, mean = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < 10; ++i) sse += (a[i] - e[i]) * (a[i] - e[i]), mean += a[i];
    mean /= 10.0;
    for (double v : a) sst += (v - mean) * (v - mean);
    EXPECT_NEAR(ise(a, e, dt), trap, 1e-12 * trap);
    EXPECT_NEAR(mse_paper(a, e), sse, 1e-12 * sse);
    EXPECT_NEAR(r2(a, e), 1.0 - sse / sst, 1e-12 * std::abs(1.0 - sse / sst));
  }
}
