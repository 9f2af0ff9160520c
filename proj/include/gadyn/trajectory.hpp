#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gadyn/matrix.hpp"

namespace gadyn {

/// Raised when a time series breaks the sampling invariants (too short,
/// non-increasing or non-uniform grid, shape mismatch, non-finite values).
class InvalidTrajectory : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Relative tolerance on grid spacing uniformity.
inline constexpr double kUniformSpacingTolerance = 1e-9;

/// Variable names used when none are supplied: x, y, z for up to three
/// states, x1..xn otherwise.
[[nodiscard]] inline std::vector<std::string> default_names(std::size_t n) {
  if (n <= 3) {
    static const char* const short_names[] = {"x", "y", "z"};
    return {short_names, short_names + n};
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}

/// Checks that `t` is strictly increasing and uniform; returns the spacing.
inline double check_uniform_grid(const std::vector<double>& t) {
  if (t.size() < 3)
    throw InvalidTrajectory("time grid needs at least 3 samples, got " + std::to_string(t.size()));
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k])) throw InvalidTrajectory("non-finite time at sample " + std::to_string(k));
    if (k > 0 && !(t[k] > t[k - 1]))
      throw InvalidTrajectory("time not strictly increasing at sample " + std::to_string(k));
  }
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double step = t[k] - t[k - 1];
    if (std::abs(step - h) > kUniformSpacingTolerance * h + 1e-15 * std::abs(t[k]))
      throw InvalidTrajectory("non-uniform time grid at sample " + std::to_string(k));
  }
  return h;
}

/// Uniformly sampled multivariate time series: one row of `states` per time
/// sample, one column per state variable.
struct Trajectory {
  std::vector<double> t;
  Matrix states;
  std::vector<std::string> names;

  [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return states.cols(); }
  [[nodiscard]] double spacing() const {
    return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  }

  void validate() const {
    if (states.rows() != t.size())
      throw InvalidTrajectory("state rows (" + std::to_string(states.rows()) +
                              ") do not match time samples (" + std::to_string(t.size()) + ")");
    if (states.cols() == 0) throw InvalidTrajectory("trajectory has no state variables");
    if (names.size() != states.cols()) throw InvalidTrajectory("one name per state variable required");
    check_uniform_grid(t);
    for (double v : states.data())
      if (!std::isfinite(v)) throw InvalidTrajectory("non-finite state value");
  }
};

enum class DerivativeSource { numerical, analytic };

[[nodiscard]] inline const char* to_string(DerivativeSource s) noexcept {
  return s == DerivativeSource::numerical ? "numerical" : "analytic";
}

/// Time derivatives on the grid of the trajectory they came from.
struct DerivativeSet {
  std::vector<double> t;
  Matrix values;
  DerivativeSource source = DerivativeSource::numerical;

  [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return values.cols(); }
  [[nodiscard]] double spacing() const {
    return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  }
};

}  // namespace gadyn
