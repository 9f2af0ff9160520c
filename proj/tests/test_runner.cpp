#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gadyn/runner.hpp"

using namespace gadyn;

namespace {

ExperimentConfig tiny(const std::string& system, FitMode mode) {
  auto cfg = ExperimentConfig::for_system(system);
  cfg.mode = mode;
  cfg.integrator.dt_out = system == "lorenz" ? 0.01 : 0.05;
  cfg.dynamic.outer_iterations = 60;
  cfg.dynamic.inner_population = 30;
  cfg.dynamic.inner_generations = 30;
  cfg.ga.population_size = 60;
  cfg.ga.generations = 900;
  return cfg;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gadyn_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Runner, SystemDefaults) {
  const auto lin = ExperimentConfig::for_system("linear");
  EXPECT_EQ(lin.search_limit, 10.0);
  EXPECT_EQ(lin.integrator.initial_condition, (StateVector{0.0, 2.0}));
  EXPECT_EQ(lin.evaluations_per_equation(), 20'000'000u);
  auto lor = ExperimentConfig::for_system("lorenz");
  EXPECT_EQ(lor.search_limit, 30.0);
  lor.mode = FitMode::fixed;
  EXPECT_EQ(lor.evaluations_per_equation(), 20'000'000u);
  EXPECT_THROW((void)ExperimentConfig::for_system("pendulum"), ConfigError);
}

TEST(Runner, FastBudgetKeepsParity) {
  auto cfg = ExperimentConfig::for_system("cubic");
  apply_fast_budget(cfg);
  const auto dyn = cfg.dynamic.evaluations();
  EXPECT_EQ(dyn, 300u * 60u * 60u);
  EXPECT_EQ(cfg.ga.evaluations(), dyn);
}

TEST(Runner, ConfigParsesSectionsAndComments) {
  std::istringstream in(
      "; comment\n"
      "[data]\nsystem = lorenz\nt_end = 5\n"
      "# another\n"
      "[fit]\nmode = fixed\nseed = 9\n"
      "[ga]\npopulation_size = 120\n"
      "[dynamic]\nthreshold = 1e-5\nwarm_start = true\n");
  ExperimentConfig cfg;
  apply_config(cfg, in);
  EXPECT_EQ(cfg.system, "lorenz");
  EXPECT_EQ(cfg.integrator.t_end, 5.0);
  EXPECT_EQ(cfg.integrator.initial_condition, (StateVector{-8.0, 7.0, 27.0}));
  EXPECT_EQ(cfg.search_limit, 30.0);
  EXPECT_EQ(cfg.mode, FitMode::fixed);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.ga.population_size, 120u);
  EXPECT_EQ(cfg.dynamic.threshold, 1e-5);
  EXPECT_TRUE(cfg.dynamic.warm_start);
}

TEST(Runner, ConfigSystemAppliesBeforeOtherKeys) {
  std::istringstream in("[data]\nt_end = 3\nsystem = cubic\n");
  ExperimentConfig cfg;
  apply_config(cfg, in);
  EXPECT_EQ(cfg.system, "cubic");
  EXPECT_EQ(cfg.integrator.t_end, 3.0);
}

TEST(Runner, ConfigErrors) {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    ExperimentConfig cfg;
    EXPECT_THROW(apply_config(cfg, in), ConfigError) << text;
  };
  fails("[ga]\npopulation = 10\n");
  fails("[ga]\npopulation_size = ten\n");
  fails("[ga]\npopulation_size = -3\n");
  fails("[fit]\nmode = adaptive\n");
  fails("[data]\nsystem = duffing\n");
  fails("[dynamic]\nwarm_start = maybe\n");
  fails("seed = 3\n");
  fails("[ga]\ngenerations = 5\ngenerations = 6\n");
}

TEST(Runner, ConfigRoundTrip) {
  auto cfg = ExperimentConfig::for_system("lorenz");
  cfg.seed = 77;
  cfg.integrator.dt_out = 0.004;
  cfg.dynamic.expand_factor = 1.25;
  cfg.ga.mutation_prob = 1.0 / 3.0;
  std::stringstream ss;
  write_config(ss, cfg);
  ExperimentConfig back;
  apply_config(back, ss);
  std::stringstream again;
  write_config(again, back);
  EXPECT_EQ(ss.str(), again.str());
  EXPECT_EQ(back.ga.mutation_prob, 1.0 / 3.0);
  EXPECT_EQ(back.integrator.initial_condition, cfg.integrator.initial_condition);
}

TEST(Runner, ValidationCatchesBadRuns) {
  auto cfg = ExperimentConfig::for_system("linear");
  cfg.integrator.initial_condition = {1.0, 2.0, 3.0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig::for_system("linear");
  cfg.integrator.t_end = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig::for_system("csv");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.data_path = "x.csv";
  cfg.derivatives = DerivativeSource::analytic;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig::for_system("linear");
  cfg.degree = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig::for_system("linear");
  cfg.dynamic.inner_population = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Runner, DynamicLinearRunRecoversTheModel) {
  auto cfg = tiny("linear", FitMode::dynamic);
  cfg.derivatives = DerivativeSource::analytic;
  cfg.dynamic.outer_iterations = 2000;
  cfg.dynamic.inner_population = 40;
  cfg.dynamic.inner_generations = 40;
  cfg.threads = 2;
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.sparsity.support_size(), 4u);
  EXPECT_NEAR(r.coefficients(0, 0), -0.1, 5e-2);
  EXPECT_NEAR(r.coefficients(3, 0), 2.0, 5e-2);
  EXPECT_NEAR(r.coefficients(0, 1), -2.0, 5e-2);
  EXPECT_NEAR(r.coefficients(3, 1), -0.1, 5e-2);
  EXPECT_TRUE(r.converged());
  ASSERT_TRUE(r.resimulation_metrics.has_value());
  EXPECT_GT(r.resimulation_metrics->r2, 0.99);
  for (const auto& e : r.equations) EXPECT_EQ(e.evaluations, cfg.dynamic.evaluations());
}

TEST(Runner, ThreadCountDoesNotChangeResults) {
  auto cfg = tiny("lorenz", FitMode::dynamic);
  cfg.integrator.t_end = 2.0;
  cfg.dynamic.outer_iterations = 20;
  cfg.resimulate = false;
  cfg.threads = 1;
  const auto serial = run_experiment(cfg);
  cfg.threads = 3;
  const auto parallel = run_experiment(cfg);
  EXPECT_EQ(serial.coefficients, parallel.coefficients);
}

TEST(Runner, FixedModeMatchesBudgetAndKeepsLimits) {
  auto cfg = tiny("cubic", FitMode::fixed);
  cfg.resimulate = false;
  const auto r = run_experiment(cfg);
  for (const auto& e : r.equations) {
    EXPECT_EQ(e.evaluations, cfg.ga.evaluations());
    EXPECT_EQ(e.ga_history.size(), cfg.ga.generations);
    EXPECT_FALSE(e.dynamic.has_value());
  }
  for (double v : r.coefficients.data()) EXPECT_LE(std::abs(v), 10.0);
}

TEST(Runner, ResimulatingTheTrueModelReproducesTheData) {
  const auto data = load_data(ExperimentConfig::for_system("linear"));
  const auto basis = build_basis(2, 3);
  const auto sim = resimulate(basis, true_coefficients(Benchmark::linear, basis), data, IntegratorConfig{});
  const auto m = compare(data.states, sim.states, data.spacing());
  EXPECT_LT(m.ise, 1e-12);
}

TEST(Runner, ZeroModelStaysAtTheInitialCondition) {
  const auto data = load_data(ExperimentConfig::for_system("cubic"));
  const auto basis = build_basis(2, 3);
  const auto sim = resimulate(basis, CoefficientMatrix(9, 2, 0.0), data, IntegratorConfig{});
  for (std::size_t k = 0; k < sim.size(); ++k) {
    ASSERT_EQ(sim.states(k, 0), 0.0);
    ASSERT_EQ(sim.states(k, 1), 2.0);
  }
}

TEST(Runner, RunOutputsRoundTrip) {
  auto cfg = tiny("linear", FitMode::dynamic);
  cfg.dynamic.outer_iterations = 10;
  const auto r = run_experiment(cfg);
  const auto dir = scratch_dir("outputs");
  write_run_outputs(r, dir);
  for (const char* f : {"report.txt", "config.ini", "model.csv", "data.csv", "derivatives.csv", "history_x.csv",
                        "history_y.csv", "resimulated.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;

  const auto model = read_model_csv(dir / "model.csv");
  EXPECT_EQ(model.coeffs, r.coefficients);

  // The stored config alone reproduces the fit.
  ExperimentConfig again;
  apply_config(again, dir / "config.ini");
  const auto r2 = run_experiment(again);
  EXPECT_EQ(r2.coefficients, r.coefficients);

  std::ifstream report(dir / "report.txt");
  const std::string text((std::istreambuf_iterator<char>(report)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("[results]"), std::string::npos);
  EXPECT_NE(text.find("eq2.evaluations=" + std::to_string(cfg.dynamic.evaluations())), std::string::npos);

  // Fitting the written data as CSV input gives the same model.
  ExperimentConfig from_csv = cfg;
  from_csv.set_system("csv");
  from_csv.data_path = dir / "data.csv";
  EXPECT_EQ(run_experiment(from_csv).coefficients, r.coefficients);
  std::filesystem::remove_all(dir);
}

TEST(Runner, FixedLorenzReportsNonConvergence) {
  auto cfg = tiny("lorenz", FitMode::fixed);
  cfg.integrator.t_end = 5.0;
  cfg.resimulate = false;
  const auto r = run_experiment(cfg);
  EXPECT_FALSE(r.converged());
  std::ostringstream out;
  write_report(out, r);
  EXPECT_NE(out.str().find("converged=false"), std::string::npos);
}
