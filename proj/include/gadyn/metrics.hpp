#pragma once

// Goodness-of-fit measures between an actual signal v and an estimate v^.
//
//   ise        trapezoidal integral of (v - v^)^2 over the whole window
//   mse_paper  plain sum of squared errors, sum_k (v_k - v^_k)^2. This is NOT
//              divided by the sample count; the name keeps that visible.
//   r2         1 - SSE / SST, SST taken about the mean of v

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gadyn {

/// R^2 of a constant actual signal has a zero denominator.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require_same_length(std::span<const double> a, std::span<const double> b, const char* who) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(who) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  if (a.empty()) throw std::invalid_argument(std::string(who) + ": empty signal");
}

}  // namespace detail

[[nodiscard]] inline double ise(std::span<const double> actual, std::span<const double> est, double dt) {
  detail::require_same_length(actual, est, "ise");
  if (!(dt > 0.0)) throw std::invalid_argument("ise: dt must be > 0");
  const std::size_t N = actual.size();
  if (N == 1) return 0.0;
  double interior = 0.0;
  for (std::size_t k = 1; k + 1 < N; ++k) {
    const double r = actual[k] - est[k];
    interior += r * r;
  }
  const double r0 = actual[0] - est[0];
  const double rn = actual[N - 1] - est[N - 1];
  return dt * (interior + 0.5 * (r0 * r0 + rn * rn));
}

[[nodiscard]] inline double mse_paper(std::span<const double> actual, std::span<const double> est) {
  detail::require_same_length(actual, est, "mse_paper");
  double sse = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    const double r = actual[k] - est[k];
    sse += r * r;
  }
  return sse;
}

[[nodiscard]] inline double r2(std::span<const double> actual, std::span<const double> est) {
  detail::require_same_length(actual, est, "r2");
  double mean = 0.0;
  for (double v : actual) mean += v;
  mean /= static_cast<double>(actual.size());
  double sst = 0.0;
  for (double v : actual) sst += (v - mean) * (v - mean);
  if (!(sst > 0.0)) throw UndefinedMetric("r2: actual signal has zero variance");
  return 1.0 - mse_paper(actual, est) / sst;
}

struct EquationMetrics {
  double ise = 0.0;
  double mse_paper = 0.0;
  double r2 = 0.0;  // NaN when undefined
};

/// Per-equation metrics plus totals. `ise` and `mse_paper` sum over
/// equations; `r2` is the worst (smallest) per-equation value.
struct MetricReport {
  double dt = 0.0;
  std::vector<EquationMetrics> equations;
  double ise = 0.0;
  double mse_paper = 0.0;
  double r2 = 0.0;
};

/// Column-wise comparison of two N x n tables sampled every `dt`.
template <class Table>
[[nodiscard]] MetricReport compare(const Table& actual, const Table& est, double dt) {
  if (actual.rows() != est.rows() || actual.cols() != est.cols())
    throw std::invalid_argument("compare: table shapes differ");
  MetricReport report;
  report.dt = dt;
  report.r2 = 1.0;
  for (std::size_t j = 0; j < actual.cols(); ++j) {
    const auto a = actual.column(j);
    const auto e = est.column(j);
    EquationMetrics m;
    m.ise = ise(a, e, dt);
    m.mse_paper = mse_paper(a, e);
    try {
      m.r2 = r2(a, e);
    } catch (const UndefinedMetric&) {
      m.r2 = std::nan("");
    }
    report.equations.push_back(m);
    report.ise += m.ise;
    report.mse_paper += m.mse_paper;
    report.r2 = std::isnan(m.r2) || std::isnan(report.r2) ? std::nan("") : std::min(report.r2, m.r2);
  }
  return report;
}

}  // namespace gadyn
