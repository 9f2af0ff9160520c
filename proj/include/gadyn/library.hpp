#pragma once

// Candidate polynomial library: monomial basis, feature evaluation, and the
// polynomial vector field defined by a coefficient matrix.
//
// Canonical term order (n = 3, m = 3):
//   x, x^2, x^3, y, y^2, y^3, z, z^2, z^3,
//   x^2*y, x^2*z, x*y^2, y^2*z, x*z^2, y*z^2, x*y*z, x*y, x*z, y*z
// i.e. pure powers per variable, then mixed terms from the highest degree
// down. Within a degree, mixed terms are grouped by exponent pattern and then
// by their dominant variable. For two variables the mixed terms of a degree
// are listed x*y^k first (x*y^2, x^2*y, x*y for m = 3).
//
// Results are always indexed by monomial, never by position: published
// coefficient tables for the 3-variable case also appear under the order
// x, x^2, y, y^2, z, z^2, x*y, x*z, y*z, ...

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gadyn/dynsys.hpp"
#include "gadyn/matrix.hpp"
#include "gadyn/signal.hpp"
#include "gadyn/trajectory.hpp"

namespace gadyn {

struct Monomial {
  std::vector<unsigned> exponents;

  [[nodiscard]] unsigned degree() const noexcept {
    unsigned d = 0;
    for (unsigned e : exponents) d += e;
    return d;
  }

  [[nodiscard]] double evaluate(std::span<const double> x) const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < exponents.size(); ++i)
      for (unsigned e = 0; e < exponents[i]; ++e) v *= x[i];
    return v;
  }

  /// e.g. `x^2*y`; the constant monomial renders as `1`.
  [[nodiscard]] std::string label(const std::vector<std::string>& names) const {
    std::string out;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] == 0) continue;
      if (!out.empty()) out += '*';
      out += names.at(i);
      if (exponents[i] > 1) out += '^' + std::to_string(exponents[i]);
    }
    return out.empty() ? "1" : out;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Parses a label produced by Monomial::label against the given names.
[[nodiscard]] inline Monomial parse_monomial(std::string_view label, const std::vector<std::string>& names) {
  Monomial m{std::vector<unsigned>(names.size(), 0)};
  label = detail::trim(label);
  if (label == "1") return m;
  std::size_t start = 0;
  while (start <= label.size()) {
    const std::size_t star = label.find('*', start);
    std::string_view factor =
        detail::trim(label.substr(start, star == std::string_view::npos ? label.npos : star - start));
    unsigned power = 1;
    if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
      const auto digits = factor.substr(caret + 1);
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), power);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || power == 0)
        throw std::invalid_argument("bad exponent in term '" + std::string(label) + "'");
      factor = factor.substr(0, caret);
    }
    const auto it = std::find(names.begin(), names.end(), factor);
    if (it == names.end()) throw std::invalid_argument("unknown variable '" + std::string(factor) + "'");
    m.exponents[static_cast<std::size_t>(it - names.begin())] += power;
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  return m;
}

/// Ordered, duplicate-free list of monomials over n state variables.
class Basis {
 public:
  Basis(std::size_t n, std::vector<Monomial> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ == 0) throw std::invalid_argument("Basis: need at least one variable");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].exponents.size() != n_) throw std::invalid_argument("Basis: monomial arity mismatch");
      for (std::size_t j = 0; j < i; ++j)
        if (terms_[i] == terms_[j]) throw std::invalid_argument("Basis: duplicate monomial");
      degree_ = std::max(degree_, terms_[i].degree());
    }
  }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] unsigned degree() const noexcept { return degree_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] const std::vector<Monomial>& terms() const noexcept { return terms_; }
  [[nodiscard]] const Monomial& operator[](std::size_t i) const { return terms_.at(i); }

  [[nodiscard]] std::vector<std::string> labels(const std::vector<std::string>& names) const {
    if (names.size() != n_) throw std::invalid_argument("Basis::labels: one name per variable required");
    std::vector<std::string> out;
    for (const auto& t : terms_) out.push_back(t.label(names));
    return out;
  }

  /// Position of `m` in the basis, or size() when absent.
  [[nodiscard]] std::size_t index_of(const Monomial& m) const {
    return static_cast<std::size_t>(std::find(terms_.begin(), terms_.end(), m) - terms_.begin());
  }

 private:
  std::size_t n_;
  unsigned degree_ = 0;
  std::vector<Monomial> terms_;
};

namespace detail {

inline void enumerate_degree(std::size_t n, unsigned degree, std::size_t var, std::vector<unsigned>& cur,
                             std::vector<std::vector<unsigned>>& out) {
  if (var + 1 == n) {
    cur[var] = degree;
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (unsigned e = degree + 1; e-- > 0;) {
    cur[var] = e;
    enumerate_degree(n, degree - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

// Sort key for mixed terms: exponent pattern (descending), then variables
// ordered by (exponent desc, index asc).
inline std::pair<std::vector<unsigned>, std::vector<std::size_t>> mixed_key(const std::vector<unsigned>& e) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] > 0) vars.push_back(i);
  std::stable_sort(vars.begin(), vars.end(), [&](std::size_t a, std::size_t b) { return e[a] > e[b]; });
  std::vector<unsigned> pattern;
  for (std::size_t v : vars) pattern.push_back(e[v]);
  return {pattern, vars};
}

}  // namespace detail

/// All monomials of total degree 1..m over n variables, in canonical order;
/// p = C(n + m, m) - 1 terms (one more with `include_constant`).
[[nodiscard]] inline Basis build_basis(std::size_t n, unsigned m, bool include_constant = false) {
  if (n == 0 || m == 0) throw std::invalid_argument("build_basis: n >= 1 and m >= 1 required");
  std::vector<Monomial> terms;
  if (include_constant) terms.push_back(Monomial{std::vector<unsigned>(n, 0)});
  for (std::size_t i = 0; i < n; ++i)
    for (unsigned d = 1; d <= m; ++d) {
      std::vector<unsigned> e(n, 0);
      e[i] = d;
      terms.push_back(Monomial{e});
    }
  for (unsigned d = m; d >= 2; --d) {
    std::vector<std::vector<unsigned>> all;
    std::vector<unsigned> cur(n, 0);
    detail::enumerate_degree(n, d, 0, cur, all);
    std::vector<std::vector<unsigned>> mixed;
    for (auto& e : all)
      if (std::count_if(e.begin(), e.end(), [](unsigned x) { return x > 0; }) >= 2) mixed.push_back(e);
    std::sort(mixed.begin(), mixed.end(), [](const auto& a, const auto& b) {
      const auto ka = detail::mixed_key(a);
      const auto kb = detail::mixed_key(b);
      if (ka.first != kb.first) return ka.first > kb.first;
      return ka.second < kb.second;
    });
    if (n == 2) std::reverse(mixed.begin(), mixed.end());
    for (auto& e : mixed) terms.push_back(Monomial{std::move(e)});
  }
  return Basis(n, std::move(terms));
}

/// p x n coefficients; column j holds the coefficients of equation j.
using CoefficientMatrix = Matrix;

/// N x p; entry (k, j) is term j evaluated at sample k.
using FeatureMatrix = Matrix;

[[nodiscard]] inline FeatureMatrix evaluate_features(const Basis& basis, const Matrix& states) {
  if (states.cols() != basis.n())
    throw std::invalid_argument("evaluate_features: states have " + std::to_string(states.cols()) +
                                " variables, basis expects " + std::to_string(basis.n()));
  FeatureMatrix out(states.rows(), basis.size());
  for (std::size_t k = 0; k < states.rows(); ++k) {
    const auto x = states.row(k);
    for (std::size_t j = 0; j < basis.size(); ++j) out(k, j) = basis[j].evaluate(x);
  }
  return out;
}

[[nodiscard]] inline FeatureMatrix evaluate_features(const Basis& basis, const Trajectory& traj) {
  return evaluate_features(basis, traj.states);
}

/// Estimated derivatives Theta * xi for one equation's coefficient vector.
[[nodiscard]] inline std::vector<double> predict(const FeatureMatrix& features, std::span<const double> coeffs) {
  if (coeffs.size() != features.cols()) throw std::invalid_argument("predict: coefficient count mismatch");
  std::vector<double> out(features.rows(), 0.0);
  for (std::size_t k = 0; k < features.rows(); ++k) {
    const auto row = features.row(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * coeffs[j];
    out[k] = acc;
  }
  return out;
}

/// Polynomial vector field x' = Theta(x) * Xi.
[[nodiscard]] inline VectorField model_rhs(const Basis& basis, const CoefficientMatrix& coeffs) {
  if (coeffs.rows() != basis.size() || coeffs.cols() != basis.n())
    throw std::invalid_argument("model_rhs: coefficient matrix is " + std::to_string(coeffs.rows()) + "x" +
                                std::to_string(coeffs.cols()) + ", expected " + std::to_string(basis.size()) +
                                "x" + std::to_string(basis.n()));
  return VectorField(
      basis.n(),
      [basis, coeffs](double, std::span<const double> x, std::span<double> dxdt) {
        std::fill(dxdt.begin(), dxdt.end(), 0.0);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const double theta = basis[j].evaluate(x);
          const auto row = coeffs.row(j);
          for (std::size_t e = 0; e < dxdt.size(); ++e) dxdt[e] += theta * row[e];
        }
      },
      "polynomial_model");
}

struct SupportEntry {
  std::size_t equation;
  std::size_t term;
  std::string label;
  double value;
};

struct SparsityReport {
  std::vector<SupportEntry> entries;
  /// One rendered equation per state, e.g. `dx/dt = -0.1*x + 2*y`.
  std::vector<std::string> equations;

  [[nodiscard]] std::size_t support_size() const noexcept { return entries.size(); }

  [[nodiscard]] std::vector<std::string> support_labels(std::size_t equation) const {
    std::vector<std::string> out;
    for (const auto& e : entries)
      if (e.equation == equation) out.push_back(e.label);
    return out;
  }
};

namespace detail {

inline std::string format_coefficient(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

}  // namespace detail

/// Terms with |value| > tol, per equation, plus rendered equations.
[[nodiscard]] inline SparsityReport sparsity_report(const Basis& basis, const CoefficientMatrix& coeffs, double tol,
                                                    const std::vector<std::string>& names) {
  if (!(tol >= 0.0)) throw std::invalid_argument("sparsity_report: tol must be >= 0");
  if (coeffs.rows() != basis.size() || coeffs.cols() != names.size())
    throw std::invalid_argument("sparsity_report: shape mismatch");
  const auto labels = basis.labels(names);
  SparsityReport report;
  for (std::size_t eq = 0; eq < coeffs.cols(); ++eq) {
    std::string rhs;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double v = coeffs(j, eq);
      if (!(std::abs(v) > tol)) continue;
      report.entries.push_back({eq, j, labels[j], v});
      if (rhs.empty()) {
        rhs = (v < 0 ? "-" : "");
      } else {
        rhs += (v < 0 ? " - " : " + ");
      }
      rhs += detail::format_coefficient(std::abs(v)) + "*" + labels[j];
    }
    report.equations.push_back("d" + names[eq] + "/dt = " + (rhs.empty() ? "0" : rhs));
  }
  return report;
}

/// Model CSV: header `term,eq1,...,eqn`, one row per monomial label.
inline void write_model_csv(std::ostream& out, const Basis& basis, const CoefficientMatrix& coeffs,
                            const std::vector<std::string>& names) {
  if (coeffs.rows() != basis.size() || coeffs.cols() != basis.n())
    throw std::invalid_argument("write_model_csv: shape mismatch");
  const auto labels = basis.labels(names);
  out << "term";
  for (std::size_t eq = 0; eq < coeffs.cols(); ++eq) out << ",eq" << eq + 1;
  out << '\n';
  for (std::size_t j = 0; j < basis.size(); ++j) {
    out << labels[j];
    for (std::size_t eq = 0; eq < coeffs.cols(); ++eq) out << ',' << detail::format_double(coeffs(j, eq));
    out << '\n';
  }
}

inline void write_model_csv(const std::filesystem::path& path, const Basis& basis, const CoefficientMatrix& coeffs,
                            const std::vector<std::string>& names) {
  auto out = detail::open_for_write(path);
  write_model_csv(out, basis, coeffs, names);
}

struct PolynomialModel {
  std::vector<std::string> names;
  Basis basis;
  CoefficientMatrix coeffs;
};

/// Reads a model CSV. Variable names are the labels of the degree-one rows,
/// in row order; there must be exactly one per equation column.
[[nodiscard]] inline PolynomialModel read_model_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw CsvError("empty model file", 1);
  const auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header[0] != "term") throw CsvError("header must be 'term,eq1,...'", 1);
  const std::size_t n = header.size() - 1;
  for (std::size_t eq = 0; eq < n; ++eq)
    if (header[eq + 1] != "eq" + std::to_string(eq + 1))
      throw CsvError("expected column 'eq" + std::to_string(eq + 1) + "'", 1);

  std::vector<std::string> labels;
  std::vector<std::size_t> label_lines;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != n + 1)
      throw CsvError("expected " + std::to_string(n + 1) + " columns, found " + std::to_string(cells.size()),
                     line_no);
    labels.emplace_back(cells[0]);
    label_lines.push_back(line_no);
    for (std::size_t eq = 0; eq < n; ++eq) values.push_back(detail::parse_double(cells[eq + 1], line_no));
  }

  std::vector<std::string> names;
  for (const auto& l : labels)
    if (l.find_first_of("*^") == std::string::npos && l != "1") names.push_back(l);
  if (names.size() != n)
    throw std::invalid_argument("model has " + std::to_string(n) + " equations but " +
                                std::to_string(names.size()) + " degree-one terms");

  std::vector<Monomial> terms;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    try {
      terms.push_back(parse_monomial(labels[r], names));
    } catch (const std::invalid_argument& e) {
      throw CsvError(e.what(), label_lines[r]);
    }
  }
  Basis basis(n, std::move(terms));
  CoefficientMatrix coeffs(basis.size(), n);
  std::copy(values.begin(), values.end(), coeffs.data().begin());
  return {std::move(names), std::move(basis), std::move(coeffs)};
}

[[nodiscard]] inline PolynomialModel read_model_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  try {
    return read_model_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(e.message(), e.line(), path.string());
  }
}

/// Coefficients of a benchmark system in the canonical degree-3 basis.
[[nodiscard]] inline CoefficientMatrix true_coefficients(Benchmark b, const Basis& basis) {
  const auto names = default_names(basis.n());
  CoefficientMatrix xi(basis.size(), basis.n(), 0.0);
  auto set = [&](const char* label, std::size_t eq, double v) {
    const std::size_t j = basis.index_of(parse_monomial(label, names));
    if (j == basis.size()) throw std::invalid_argument(std::string("true_coefficients: basis lacks ") + label);
    xi(j, eq) = v;
  };
  switch (b) {
    case Benchmark::linear:
      if (basis.n() != 2) throw std::invalid_argument("true_coefficients: linear system has 2 states");
      set("x", 0, -0.1), set("y", 0, 2.0), set("x", 1, -2.0), set("y", 1, -0.1);
      break;
    case Benchmark::cubic:
      if (basis.n() != 2) throw std::invalid_argument("true_coefficients: cubic system has 2 states");
      set("x^3", 0, -0.1), set("y^3", 0, 2.0), set("x^3", 1, -2.0), set("y^3", 1, -0.1);
      break;
    case Benchmark::lorenz:
      if (basis.n() != 3) throw std::invalid_argument("true_coefficients: Lorenz system has 3 states");
      set("x", 0, -10.0), set("y", 0, 10.0);
      set("x", 1, 28.0), set("y", 1, -1.0), set("x*z", 1, -1.0);
      set("z", 2, -8.0 / 3.0), set("x*y", 2, 1.0);
      break;
  }
  return xi;
}

}  // namespace gadyn
