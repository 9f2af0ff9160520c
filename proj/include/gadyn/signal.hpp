#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gadyn/dynsys.hpp"
#include "gadyn/trajectory.hpp"

namespace gadyn {

/// Second-order finite differences: central on interior samples, one-sided
/// three-point stencils at both ends. Exact for polynomials of degree <= 2.
[[nodiscard]] inline DerivativeSet differentiate(const Trajectory& traj) {
  traj.validate();
  const std::size_t N = traj.size();
  const std::size_t n = traj.dimension();
  const double h = traj.spacing();
  const double inv2h = 1.0 / (2.0 * h);

  DerivativeSet out{traj.t, Matrix(N, n), DerivativeSource::numerical};
  const Matrix& s = traj.states;
  for (std::size_t j = 0; j < n; ++j) {
    out.values(0, j) = (-3.0 * s(0, j) + 4.0 * s(1, j) - s(2, j)) * inv2h;
    for (std::size_t k = 1; k + 1 < N; ++k) out.values(k, j) = (s(k + 1, j) - s(k - 1, j)) * inv2h;
    out.values(N - 1, j) = (3.0 * s(N - 1, j) - 4.0 * s(N - 2, j) + s(N - 3, j)) * inv2h;
  }
  return out;
}

/// Evaluates the vector field on every sample: ground-truth derivatives.
[[nodiscard]] inline DerivativeSet analytic_derivatives(const VectorField& field, const Trajectory& traj) {
  traj.validate();
  if (field.dimension() != traj.dimension())
    throw std::invalid_argument("analytic_derivatives: field dimension " + std::to_string(field.dimension()) +
                                " != trajectory dimension " + std::to_string(traj.dimension()));
  DerivativeSet out{traj.t, Matrix(traj.size(), traj.dimension()), DerivativeSource::analytic};
  for (std::size_t k = 0; k < traj.size(); ++k) field.evaluate(traj.t[k], traj.states.row(k), out.values.row(k));
  return out;
}

/// CSV syntax or content error; `line()` is 1-based and counts the header.
class CsvError : public std::invalid_argument {
 public:
  CsvError(const std::string& message, std::size_t line, const std::string& source = {})
      : std::invalid_argument((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " +
                              message),
        message_(message), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline double parse_double(std::string_view cell, std::size_t line) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc{} || ptr != last)
    throw CsvError("not a number: '" + std::string(cell) + "'", line);
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(len)};
}

}  // namespace detail

/// Reads `t,<name1>,...` CSV into a validated trajectory.
[[nodiscard]] inline Trajectory read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw CsvError("empty file, header required", 1);
  ++line_no;
  const auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header[0] != "t")
    throw CsvError("header must be 't,<name1>,...'", line_no);
  Trajectory traj;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) throw CsvError("empty column name", line_no);
    traj.names.emplace_back(header[c]);
  }
  const std::size_t n = traj.names.size();

  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != n + 1)
      throw CsvError("expected " + std::to_string(n + 1) + " columns, found " + std::to_string(cells.size()),
                     line_no);
    const double t = detail::parse_double(cells[0], line_no);
    if (!std::isfinite(t)) throw CsvError("non-finite time", line_no);
    if (!traj.t.empty() && !(t > traj.t.back())) throw CsvError("time is not strictly increasing", line_no);
    traj.t.push_back(t);
    for (std::size_t c = 1; c <= n; ++c) {
      const double v = detail::parse_double(cells[c], line_no);
      if (!std::isfinite(v)) throw CsvError("non-finite value", line_no);
      values.push_back(v);
    }
  }
  traj.states = Matrix(traj.t.size(), n);
  std::copy(values.begin(), values.end(), traj.states.data().begin());
  traj.validate();
  return traj;
}

[[nodiscard]] inline Trajectory read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  try {
    return read_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(e.message(), e.line(), path.string());
  }
}

namespace detail {

inline void write_table(std::ostream& out, const std::vector<double>& t, const Matrix& values,
                        const std::vector<std::string>& columns) {
  out << 't';
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t k = 0; k < t.size(); ++k) {
    out << format_double(t[k]);
    for (std::size_t j = 0; j < values.cols(); ++j) out << ',' << format_double(values(k, j));
    out << '\n';
  }
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace detail

/// Writes at 17 significant digits, so read_csv(write_csv(x)) == x.
inline void write_csv(std::ostream& out, const Trajectory& traj) {
  detail::write_table(out, traj.t, traj.states, traj.names);
}

inline void write_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = detail::open_for_write(path);
  write_csv(out, traj);
}

/// Derivative columns are named d<name>.
inline void write_csv(std::ostream& out, const DerivativeSet& derivs, const std::vector<std::string>& names) {
  if (names.size() != derivs.dimension()) throw std::invalid_argument("write_csv: one name per derivative column");
  std::vector<std::string> columns;
  for (const auto& n : names) columns.push_back("d" + n);
  detail::write_table(out, derivs.t, derivs.values, columns);
}

inline void write_csv(const std::filesystem::path& path, const DerivativeSet& derivs,
                      const std::vector<std::string>& names) {
  auto out = detail::open_for_write(path);
  write_csv(out, derivs, names);
}

}  // namespace gadyn
