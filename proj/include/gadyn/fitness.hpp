#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gadyn/library.hpp"
#include "gadyn/matrix.hpp"
#include "gadyn/metrics.hpp"

namespace gadyn {

/// ISE between a target derivative signal and FeatureMatrix * genes.
///
/// The trapezoidal ISE is a quadratic form in the genes,
///   ISE(g) = g' A g - 2 b' g + c,   A = F' W F,  b = F' W v,  c = v' W v,
/// with W the trapezoid weights (dt inside, dt/2 at both ends), so A, b and c
/// are accumulated once and each evaluation costs O(p^2) instead of O(N p).
/// The result equals ise(v, F g, dt) up to rounding; it is clamped at zero.
class IseFitness {
 public:
  IseFitness(const FeatureMatrix& features, std::span<const double> target, double dt)
      : p_(features.cols()), gram_(p_ * p_, 0.0), cross_(p_, 0.0) {
    const std::size_t N = features.rows();
    if (target.size() != N)
      throw std::invalid_argument("IseFitness: target has " + std::to_string(target.size()) + " samples, features " +
                                  std::to_string(N));
    if (N < 2) throw std::invalid_argument("IseFitness: need at least two samples");
    if (!(dt > 0.0)) throw std::invalid_argument("IseFitness: dt must be > 0");
    for (std::size_t k = 0; k < N; ++k) {
      const double w = (k == 0 || k + 1 == N) ? 0.5 * dt : dt;
      const auto row = features.row(k);
      for (std::size_t i = 0; i < p_; ++i) {
        const double wi = w * row[i];
        cross_[i] += wi * target[k];
        for (std::size_t j = i; j < p_; ++j) gram_[i * p_ + j] += wi * row[j];
      }
      constant_ += w * target[k] * target[k];
    }
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = 0; j < i; ++j) gram_[i * p_ + j] = gram_[j * p_ + i];
  }

  [[nodiscard]] std::size_t size() const noexcept { return p_; }

  /// ISE of the zero model, i.e. the integral of v^2.
  [[nodiscard]] double signal_energy() const noexcept { return constant_; }

  [[nodiscard]] double operator()(std::span<const double> genes) const {
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < p_; ++i) {
      const double gi = genes[i];
      if (gi == 0.0) continue;
      const double* row = gram_.data() + i * p_;
      double acc = 0.0;
      for (std::size_t j = 0; j < p_; ++j) acc += row[j] * genes[j];
      quad += gi * acc;
      lin += gi * cross_[i];
    }
    return std::max(0.0, constant_ - 2.0 * lin + quad);
  }

 private:
  std::size_t p_;
  std::vector<double> gram_;
  std::vector<double> cross_;
  double constant_ = 0.0;
};

/// Reference evaluation through the residual signal; used for reporting and
/// to cross-check IseFitness.
[[nodiscard]] inline double direct_ise(const FeatureMatrix& features, std::span<const double> target, double dt,
                                       std::span<const double> genes) {
  const auto est = predict(features, genes);
  return ise(target, est, dt);
}

}  // namespace gadyn
