#include <gtest/gtest.h>

#include <sstream>

#include "gadyn/dynsys.hpp"
#include "gadyn/library.hpp"
#include "gadyn/signal.hpp"

using namespace gadyn;

TEST(Library, BasisSizesWithoutConstant) {
  EXPECT_EQ(build_basis(2, 3).size(), 9u);
  EXPECT_EQ(build_basis(3, 3).size(), 19u);
  EXPECT_EQ(build_basis(2, 3, true).size(), 10u);
  EXPECT_EQ(build_basis(3, 1).size(), 3u);
}

TEST(Library, CanonicalOrder) {
  const std::vector<std::string> two{"x", "x^2", "x^3", "y", "y^2", "y^3", "x*y^2", "x^2*y", "x*y"};
  EXPECT_EQ(build_basis(2, 3).labels({"x", "y"}), two);
  const auto three = build_basis(3, 3).labels({"x", "y", "z"});
  ASSERT_EQ(three.size(), 19u);
  EXPECT_EQ(three[0], "x");
  EXPECT_EQ(three[6], "z");
  EXPECT_EQ(three[15], "x*y*z");
  EXPECT_EQ(three[16], "x*y");
  EXPECT_EQ(three[17], "x*z");
  EXPECT_EQ(three[18], "y*z");
}

TEST(Library, MonomialEvaluation) {
  const auto basis = build_basis(2, 3);
  const auto F = evaluate_features(basis, Matrix(1, 2, 0.0));
  for (double v : F.row(0)) EXPECT_EQ(v, 0.0);
  Matrix pt(1, 2);
  pt(0, 0) = 2.0;
  pt(0, 1) = 3.0;
  const auto G = evaluate_features(basis, pt);
  EXPECT_EQ(G(0, 7), 12.0);  // x^2*y
  EXPECT_EQ(G(0, 6), 18.0);  // x*y^2
  EXPECT_EQ(G(0, 2), 8.0);
}

TEST(Library, LabelsParseBack) {
  const auto basis = build_basis(3, 3);
  const std::vector<std::string> names{"x", "y", "z"};
  for (std::size_t j = 0; j < basis.size(); ++j)
    EXPECT_EQ(basis.index_of(parse_monomial(basis[j].label(names), names)), j);
  EXPECT_THROW((void)parse_monomial("w^2", names), std::invalid_argument);
}

TEST(Library, TrueSupportSizes) {
  EXPECT_EQ(sparsity_report(build_basis(2, 3), true_coefficients(Benchmark::linear, build_basis(2, 3)), 0.0,
                            {"x", "y"}).support_size(),
            4u);
  EXPECT_EQ(sparsity_report(build_basis(2, 3), true_coefficients(Benchmark::cubic, build_basis(2, 3)), 0.0,
                            {"x", "y"}).support_size(),
            4u);
  const auto b3 = build_basis(3, 3);
  const auto rep = sparsity_report(b3, true_coefficients(Benchmark::lorenz, b3), 0.0, {"x", "y", "z"});
  EXPECT_EQ(rep.support_size(), 7u);
  EXPECT_EQ(rep.support_labels(1), (std::vector<std::string>{"x", "y", "x*z"}));
  EXPECT_EQ(rep.support_labels(2), (std::vector<std::string>{"z", "x*y"}));
}

TEST(Library, TrueModelReproducesTheField) {
  for (Benchmark b : {Benchmark::linear, Benchmark::cubic, Benchmark::lorenz}) {
    const auto field = make_benchmark(b);
    auto cfg = default_integrator_config(b);
    cfg.t_end = 1.0;
    const auto traj = integrate(field, cfg);
    const auto basis = build_basis(traj.dimension(), 3);
    const auto model = model_rhs(basis, true_coefficients(b, basis));
    for (std::size_t k = 0; k < traj.size(); k += 37) {
      const auto a = field(0.0, traj.states.row(k));
      const auto m = model(0.0, traj.states.row(k));
      for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(m[j], a[j], 1e-10 * (1.0 + std::abs(a[j])));
    }
  }
}

TEST(Library, PredictIsFeatureTimesCoefficients) {
  Matrix F(2, 3);
  F(0, 0) = 1; F(0, 1) = 2; F(0, 2) = 3;
  F(1, 0) = -1; F(1, 1) = 0; F(1, 2) = 4;
  const auto y = predict(F, std::vector<double>{1.0, 0.5, -1.0});
  EXPECT_EQ(y, (std::vector<double>{-1.0, -5.0}));
}

TEST(Library, ModelCsvRoundTrip) {
  const auto basis = build_basis(3, 3);
  const auto xi = true_coefficients(Benchmark::lorenz, basis);
  std::stringstream ss;
  write_model_csv(ss, basis, xi, {"x", "y", "z"});
  EXPECT_EQ(ss.str().substr(0, 16), "term,eq1,eq2,eq3");
  const auto back = read_model_csv(ss);
  EXPECT_EQ(back.names, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(back.basis.size(), basis.size());
  EXPECT_EQ(back.coeffs, xi);
}

TEST(Library, ModelCsvRejectsUnknownVariables) {
  std::istringstream bad("term,eq1,eq2\nx,1,0\ny,0,1\nq^2,0,0\n");
  EXPECT_THROW((void)read_model_csv(bad), std::invalid_argument);
}

TEST(Library, SparsityReportRendersEquations) {
  const auto basis = build_basis(2, 3);
  const auto rep = sparsity_report(basis, true_coefficients(Benchmark::linear, basis), 0.0, {"x", "y"});
  ASSERT_EQ(rep.equations.size(), 2u);
  EXPECT_NE(rep.equations[0].find("dx/dt"), std::string::npos);
  EXPECT_NE(rep.equations[0].find("-0.1"), std::string::npos);
}
