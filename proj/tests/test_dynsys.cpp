#include <gtest/gtest.h>

#include <cmath>

#include "gadyn/dynsys.hpp"

using namespace gadyn;

namespace {

// Damped rotation x' = -0.1x + 2y, y' = -2x - 0.1y from (0, 2).
double exact_x(double t) { return 2.0 * std::exp(-0.1 * t) * std::sin(2.0 * t); }
double exact_y(double t) { return 2.0 * std::exp(-0.1 * t) * std::cos(2.0 * t); }

double linear_error(IntegrationMethod method, double dt) {
  auto cfg = default_integrator_config(Benchmark::linear);
  cfg.method = method;
  cfg.t_end = 5.0;
  cfg.dt_out = dt;
  const auto traj = integrate(make_benchmark(Benchmark::linear), cfg);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k)
    worst = std::max({worst, std::abs(traj.states(k, 0) - exact_x(traj.t[k])),
                      std::abs(traj.states(k, 1) - exact_y(traj.t[k]))});
  return worst;
}

}  // namespace

TEST(Dynsys, Rk45MatchesClosedFormLinearSolution) {
  const auto traj = integrate(make_benchmark(Benchmark::linear), default_integrator_config(Benchmark::linear));
  ASSERT_EQ(traj.size(), 2501u);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k)
    worst = std::max({worst, std::abs(traj.states(k, 0) - exact_x(traj.t[k])),
                      std::abs(traj.states(k, 1) - exact_y(traj.t[k]))});
  EXPECT_LT(worst, 1e-6);
}

TEST(Dynsys, Rk4ObservedOrderIsFour) {
  const double coarse = linear_error(IntegrationMethod::fixed_rk4, 0.1);
  const double fine = linear_error(IntegrationMethod::fixed_rk4, 0.05);
  EXPECT_GE(std::log2(coarse / fine), 3.8);
}

TEST(Dynsys, BenchmarkFieldsAtKnownPoints) {
  const auto lorenz = make_benchmark(Benchmark::lorenz);
  const auto d = lorenz(0.0, std::vector<double>{-8.0, 7.0, 27.0});
  EXPECT_DOUBLE_EQ(d[0], 150.0);
  EXPECT_DOUBLE_EQ(d[1], -15.0);  // -8 * (28 - 27) - 7
  EXPECT_DOUBLE_EQ(d[2], -128.0);

  const auto cubic = make_benchmark(Benchmark::cubic);
  const auto c = cubic(0.0, std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(c[0], 1.9);
  EXPECT_DOUBLE_EQ(c[1], -2.1);
}

TEST(Dynsys, DefaultsPerBenchmark) {
  const auto osc = default_integrator_config(Benchmark::cubic);
  EXPECT_EQ(osc.t_end, 25.0);
  EXPECT_EQ(osc.dt_out, 0.01);
  EXPECT_EQ(osc.initial_condition, (StateVector{0.0, 2.0}));
  const auto lor = default_integrator_config(Benchmark::lorenz);
  EXPECT_EQ(lor.t_end, 20.0);
  EXPECT_EQ(lor.dt_out, 0.002);
  EXPECT_EQ(lor.initial_condition, (StateVector{-8.0, 7.0, 27.0}));
  EXPECT_EQ(lor.sample_count(), 10001u);
}

TEST(Dynsys, OutputGridIsExactAndDeterministic) {
  auto cfg = default_integrator_config(Benchmark::lorenz);
  cfg.t_end = 2.0;
  const auto a = integrate(make_benchmark(Benchmark::lorenz), cfg);
  const auto b = integrate(make_benchmark(Benchmark::lorenz), cfg);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.t.front(), 0.0);
  EXPECT_EQ(a.t.back(), 2.0);
  EXPECT_EQ(a.names, (std::vector<std::string>{"x", "y", "z"}));
}

TEST(Dynsys, RejectsBadConfigurations) {
  const auto field = make_benchmark(Benchmark::linear);
  auto cfg = default_integrator_config(Benchmark::linear);
  cfg.t_end = 0.0;
  EXPECT_THROW((void)integrate(field, cfg), std::invalid_argument);
  cfg = default_integrator_config(Benchmark::linear);
  cfg.dt_out = 0.03;  // 25 is not a multiple
  EXPECT_THROW((void)integrate(field, cfg), std::invalid_argument);
  cfg = default_integrator_config(Benchmark::linear);
  cfg.initial_condition = {1.0, 2.0, 3.0};
  EXPECT_THROW((void)integrate(field, cfg), std::invalid_argument);
  EXPECT_THROW((void)parse_benchmark("duffing"), std::invalid_argument);
}

TEST(Dynsys, BlowUpRaisesIntegrationError) {
  // x' = x^2 from x(0) = 1 escapes at t = 1.
  const VectorField blowup(1, [](double, std::span<const double> x, std::span<double> d) { d[0] = x[0] * x[0]; });
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt_out = 0.01;
  cfg.initial_condition = {1.0};
  try {
    (void)integrate(blowup, cfg);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_NEAR(e.last_valid_time(), 1.0, 0.05);
  }
}
