#pragma once

// Vector fields and a fixed-output-grid ODE integrator (Dormand-Prince 5(4)
// with step clamping, or classical RK4 with one step per output interval).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gadyn/trajectory.hpp"

namespace gadyn {

using StateVector = std::vector<double>;

/// Right-hand side f(t, x) of dx/dt = f(t, x) together with its dimension.
class VectorField {
 public:
  using Rhs = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

  VectorField(std::size_t dimension, Rhs rhs, std::string name = "custom", bool autonomous = true)
      : dimension_(dimension), rhs_(std::move(rhs)), name_(std::move(name)), autonomous_(autonomous) {
    if (dimension_ == 0) throw std::invalid_argument("VectorField: dimension must be >= 1");
    if (!rhs_) throw std::invalid_argument("VectorField: empty right-hand side");
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool autonomous() const noexcept { return autonomous_; }

  void evaluate(double t, std::span<const double> x, std::span<double> dxdt) const {
    if (x.size() != dimension_ || dxdt.size() != dimension_)
      throw std::invalid_argument("VectorField '" + name_ + "': expected state of dimension " +
                                  std::to_string(dimension_) + ", got " + std::to_string(x.size()));
    rhs_(t, x, dxdt);
  }

  [[nodiscard]] StateVector operator()(double t, std::span<const double> x) const {
    StateVector out(dimension_);
    evaluate(t, x, out);
    return out;
  }

 private:
  std::size_t dimension_;
  Rhs rhs_;
  std::string name_;
  bool autonomous_;
};

enum class Benchmark { linear, cubic, lorenz };

[[nodiscard]] inline std::string_view to_string(Benchmark b) noexcept {
  switch (b) {
    case Benchmark::linear: return "linear";
    case Benchmark::cubic: return "cubic";
    case Benchmark::lorenz: return "lorenz";
  }
  return "unknown";
}

[[nodiscard]] inline Benchmark parse_benchmark(std::string_view name) {
  if (name == "linear") return Benchmark::linear;
  if (name == "cubic") return Benchmark::cubic;
  if (name == "lorenz") return Benchmark::lorenz;
  throw std::invalid_argument("unknown benchmark system '" + std::string(name) +
                              "' (expected linear, cubic or lorenz)");
}

/// Damped linear oscillator, its cubic counterpart, and Lorenz with
/// sigma = 10, rho = 28, beta = 8/3.
[[nodiscard]] inline VectorField make_benchmark(Benchmark b) {
  switch (b) {
    case Benchmark::linear:
      return VectorField(2, [](double, std::span<const double> s, std::span<double> d) {
        d[0] = -0.1 * s[0] + 2.0 * s[1];
        d[1] = -2.0 * s[0] - 0.1 * s[1];
      }, "linear");
    case Benchmark::cubic:
      return VectorField(2, [](double, std::span<const double> s, std::span<double> d) {
        const double x3 = s[0] * s[0] * s[0];
        const double y3 = s[1] * s[1] * s[1];
        d[0] = -0.1 * x3 + 2.0 * y3;
        d[1] = -2.0 * x3 - 0.1 * y3;
      }, "cubic");
    case Benchmark::lorenz:
      return VectorField(3, [](double, std::span<const double> s, std::span<double> d) {
        constexpr double sigma = 10.0;
        constexpr double rho = 28.0;
        constexpr double beta = 8.0 / 3.0;
        d[0] = sigma * (s[1] - s[0]);
        d[1] = s[0] * (rho - s[2]) - s[1];
        d[2] = s[0] * s[1] - beta * s[2];
      }, "lorenz");
  }
  throw std::invalid_argument("make_benchmark: unknown system");
}

enum class IntegrationMethod { adaptive_rk45, fixed_rk4 };

[[nodiscard]] inline std::string_view to_string(IntegrationMethod m) noexcept {
  return m == IntegrationMethod::adaptive_rk45 ? "adaptive_rk45" : "fixed_rk4";
}

[[nodiscard]] inline IntegrationMethod parse_integration_method(std::string_view s) {
  if (s == "adaptive_rk45") return IntegrationMethod::adaptive_rk45;
  if (s == "fixed_rk4") return IntegrationMethod::fixed_rk4;
  throw std::invalid_argument("unknown integration method '" + std::string(s) + "'");
}

struct IntegratorConfig {
  double t0 = 0.0;
  double t_end = 25.0;
  double dt_out = 0.01;
  IntegrationMethod method = IntegrationMethod::adaptive_rk45;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  StateVector initial_condition;

  /// Number of output samples, t0 and t_end inclusive. The span must be an
  /// integer multiple of dt_out.
  [[nodiscard]] std::size_t sample_count() const {
    const double intervals = (t_end - t0) / dt_out;
    const double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > 1e-6 * std::max(1.0, rounded))
      throw std::invalid_argument("integrator: (t_end - t0) must be a multiple of dt_out");
    return static_cast<std::size_t>(rounded) + 1;
  }

  void validate() const {
    if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0))
      throw std::invalid_argument("integrator: t_end must be greater than t0");
    if (!std::isfinite(dt_out) || !(dt_out > 0.0)) throw std::invalid_argument("integrator: dt_out must be > 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("integrator: tolerances must be > 0");
    if (initial_condition.empty()) throw std::invalid_argument("integrator: empty initial condition");
    for (double v : initial_condition)
      if (!std::isfinite(v)) throw std::invalid_argument("integrator: non-finite initial condition");
    if (sample_count() < 3) throw std::invalid_argument("integrator: output grid needs at least 3 samples");
  }
};

[[nodiscard]] inline StateVector default_initial_condition(Benchmark b) {
  if (b == Benchmark::lorenz) return {-8.0, 7.0, 27.0};
  return {0.0, 2.0};
}

/// Oscillators: t in [0, 25] at dt 0.01. Lorenz: t in [0, 20] at dt 0.002.
[[nodiscard]] inline IntegratorConfig default_integrator_config(Benchmark b) {
  IntegratorConfig cfg;
  cfg.initial_condition = default_initial_condition(b);
  if (b == Benchmark::lorenz) {
    cfg.t_end = 20.0;
    cfg.dt_out = 0.002;
  }
  return cfg;
}

/// Integration gave up: the step size underflowed or the state became
/// non-finite. Carries the last time at which the solution was valid.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_valid_time)
      : std::runtime_error(what + " (last valid t = " + std::to_string(last_valid_time) + ")"),
        last_valid_time_(last_valid_time) {}
  [[nodiscard]] double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

namespace detail {

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // 5th minus 4th order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

class Rk45Stepper {
 public:
  Rk45Stepper(const VectorField& field, double rel_tol, double abs_tol)
      : field_(field), n_(field.dimension()), rel_(rel_tol), abs_(abs_tol),
        k_(7, StateVector(n_)), tmp_(n_), y_new_(n_), err_(n_) {}

  // Advances (t, y) to exactly t_target, adapting h. `h` carries the
  // proposed step size across calls and is never polluted by clamping.
  void advance(double& t, StateVector& y, double t_target, double& h) {
    if (!have_fsal_) {
      field_.evaluate(t, y, k_[0]);
      have_fsal_ = true;
    }
    if (h <= 0.0) h = initial_step(t, y, t_target);
    while (t < t_target) {
      const bool clamped = t + h >= t_target;
      const double step = clamped ? t_target - t : h;
      if (!(step > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))))
        throw IntegrationError("step size underflow", t);

      stage(t, y, step);
      double err = error_norm(y);
      if (!std::isfinite(err) || !all_finite(y_new_)) err = std::numeric_limits<double>::infinity();

      if (err <= 1.0) {
        t = clamped ? t_target : t + step;
        y.swap(y_new_);
        k_[0].swap(k_[6]);
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A clamped step that succeeded says nothing about larger steps.
        if (!clamped || step >= h) h = step * factor;
      } else {
        const double factor = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.2;
        h = step * factor;
      }
      if (++steps_ > kMaxSteps) throw IntegrationError("step budget exhausted", t);
    }
  }

 private:
  static constexpr std::size_t kMaxSteps = 50'000'000;

  void stage(double t, const StateVector& y, double h) {
    using DP = DormandPrince;
    auto combo = [&](auto&& fn) {
      for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * fn(i);
    };
    combo([&](std::size_t i) { return DP::a21 * k_[0][i]; });
    field_.evaluate(t + DP::c[1] * h, tmp_, k_[1]);
    combo([&](std::size_t i) { return DP::a31 * k_[0][i] + DP::a32 * k_[1][i]; });
    field_.evaluate(t + DP::c[2] * h, tmp_, k_[2]);
    combo([&](std::size_t i) { return DP::a41 * k_[0][i] + DP::a42 * k_[1][i] + DP::a43 * k_[2][i]; });
    field_.evaluate(t + DP::c[3] * h, tmp_, k_[3]);
    combo([&](std::size_t i) {
      return DP::a51 * k_[0][i] + DP::a52 * k_[1][i] + DP::a53 * k_[2][i] + DP::a54 * k_[3][i];
    });
    field_.evaluate(t + DP::c[4] * h, tmp_, k_[4]);
    combo([&](std::size_t i) {
      return DP::a61 * k_[0][i] + DP::a62 * k_[1][i] + DP::a63 * k_[2][i] + DP::a64 * k_[3][i] +
             DP::a65 * k_[4][i];
    });
    field_.evaluate(t + h, tmp_, k_[5]);
    for (std::size_t i = 0; i < n_; ++i)
      y_new_[i] = y[i] + h * (DP::b1 * k_[0][i] + DP::b3 * k_[2][i] + DP::b4 * k_[3][i] + DP::b5 * k_[4][i] +
                              DP::b6 * k_[5][i]);
    field_.evaluate(t + h, y_new_, k_[6]);
    for (std::size_t i = 0; i < n_; ++i)
      err_[i] = h * (DP::e1 * k_[0][i] + DP::e3 * k_[2][i] + DP::e4 * k_[3][i] + DP::e5 * k_[4][i] +
                     DP::e6 * k_[5][i] + DP::e7 * k_[6][i]);
  }

  double error_norm(const StateVector& y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double scale = abs_ + rel_ * std::max(std::abs(y[i]), std::abs(y_new_[i]));
      const double r = err_[i] / scale;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n_));
  }

  // Starting step heuristic from Hairer, Norsett & Wanner.
  double initial_step(double t, const StateVector& y, double t_target) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = abs_ + rel_ * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
    }
    d0 = std::sqrt(d0 / n_);
    d1 = std::sqrt(d1 / n_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_target - t);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h0 * k_[0][i];
    field_.evaluate(t + h0, tmp_, k_[1]);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = abs_ + rel_ * std::abs(y[i]);
      const double r = (k_[1][i] - k_[0][i]) / sc;
      d2 += r * r;
    }
    d2 = std::sqrt(d2 / n_) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    const double h = std::min(100.0 * h0, h1);
    return std::isfinite(h) && h > 0.0 ? h : 1e-6;
  }

  const VectorField& field_;
  std::size_t n_;
  double rel_, abs_;
  std::vector<StateVector> k_;
  StateVector tmp_, y_new_, err_;
  bool have_fsal_ = false;
  std::size_t steps_ = 0;
};

inline void rk4_step(const VectorField& field, double t, StateVector& y, double h,
                     std::vector<StateVector>& k, StateVector& tmp) {
  const std::size_t n = y.size();
  field.evaluate(t, y, k[0]);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k[0][i];
  field.evaluate(t + 0.5 * h, tmp, k[1]);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k[1][i];
  field.evaluate(t + 0.5 * h, tmp, k[2]);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k[2][i];
  field.evaluate(t + h, tmp, k[3]);
  for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
}

}  // namespace detail

/// Integrates `field` from config.initial_condition and samples the solution
/// at t0 + k * dt_out, k = 0..N-1. Deterministic for a fixed config.
[[nodiscard]] inline Trajectory integrate(const VectorField& field, const IntegratorConfig& config,
                                          std::vector<std::string> names = {}) {
  config.validate();
  const std::size_t n = field.dimension();
  if (config.initial_condition.size() != n)
    throw std::invalid_argument("integrate: initial condition has dimension " +
                                std::to_string(config.initial_condition.size()) + ", field '" + field.name() +
                                "' has " + std::to_string(n));
  if (names.empty()) names = default_names(n);
  if (names.size() != n) throw std::invalid_argument("integrate: one name per state variable required");

  const std::size_t samples = config.sample_count();
  Trajectory traj;
  traj.names = std::move(names);
  traj.t.resize(samples);
  traj.states = Matrix(samples, n);

  StateVector y = config.initial_condition;
  double t = config.t0;
  traj.t[0] = t;
  std::copy(y.begin(), y.end(), traj.states.row(0).begin());

  if (config.method == IntegrationMethod::fixed_rk4) {
    std::vector<StateVector> k(4, StateVector(n));
    StateVector tmp(n);
    for (std::size_t s = 1; s < samples; ++s) {
      const double t_next = config.t0 + static_cast<double>(s) * config.dt_out;
      detail::rk4_step(field, t, y, t_next - t, k, tmp);
      if (!detail::all_finite(y)) throw IntegrationError("non-finite state", t);
      t = t_next;
      traj.t[s] = t;
      std::copy(y.begin(), y.end(), traj.states.row(s).begin());
    }
    return traj;
  }

  detail::Rk45Stepper stepper(field, config.rel_tol, config.abs_tol);
  double h = 0.0;
  for (std::size_t s = 1; s < samples; ++s) {
    const double t_next = config.t0 + static_cast<double>(s) * config.dt_out;
    stepper.advance(t, y, t_next, h);
    traj.t[s] = t_next;
    std::copy(y.begin(), y.end(), traj.states.row(s).begin());
  }
  return traj;
}

}  // namespace gadyn
