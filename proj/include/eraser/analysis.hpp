#pragma once

// Fringe extraction from phase scans.
//
// Model: y = c + a sin x + b cos x = c + A sin(x + phase), with
// A = sqrt(a^2 + b^2), a = A cos(phase), b = A sin(phase). The fit is linear
// least squares in (c, a, b), so it has a closed-form unique minimizer.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eraser/core.hpp"

namespace eraser {

struct ScanSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<std::vector<double>> y_err;

  /// Checks strictly increasing x, matching lengths, and at least 4 points.
  void validate() const {
    if (x.size() != y.size()) throw InputError("ScanSeries: x and y lengths differ");
    if (x.size() < 4) throw InputError("ScanSeries: need at least 4 points");
    if (y_err && y_err->size() != y.size()) throw InputError("ScanSeries: y_err length differs from y");
    for (std::size_t k = 1; k < x.size(); ++k) {
      if (!(x[k] > x[k - 1])) throw InputError("ScanSeries: x must be strictly increasing");
    }
  }
};

struct FringeFit {
  double c = 0.0;
  double a = 0.0;  // sin quadrature
  double b = 0.0;  // cos quadrature
  double amplitude = 0.0;
  double visibility = 0.0;
  double phase = 0.0;  // atan2(b, a), in (-pi, pi]
  double residual_rms = 0.0;
  double raw_visibility = 0.0;  // (max - min) / (max + min) of the raw points
};

struct TestOutcome {
  bool pass = false;
  double measured = 0.0;  // visibility for flatness, max deviation for complementarity
};

namespace detail {
// Solves the symmetric 3x3 system m * sol = rhs by Gaussian elimination with
// partial pivoting. Returns false when a pivot collapses relative to the
// matrix scale.
inline bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs, std::array<double, 3>& sol) {
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double tiny = scale * 1e-13;

  for (std::size_t col = 0; col < 3; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) <= tiny) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < 3; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 3; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t k = i + 1; k < 3; ++k) acc -= m[i][k] * sol[k];
    sol[i] = acc / m[i][i];
  }
  return true;
}
}  // namespace detail

/// Least-squares sinusoid fit. Unweighted unless `s.y_err` is present, in
/// which case points are weighted by 1/y_err^2.
[[nodiscard]] inline FringeFit fit_fringe(const ScanSeries& s) {
  if (s.x.size() != s.y.size()) throw InputError("fit_fringe: x and y lengths differ");
  if (s.y_err && s.y_err->size() != s.y.size()) throw InputError("fit_fringe: y_err length differs from y");
  if (std::set<double>(s.x.begin(), s.x.end()).size() < 3) {
    throw UnderdeterminedError("fit_fringe: fewer than 3 distinct phase values");
  }

  std::array<std::array<double, 3>, 3> normal{};
  std::array<double, 3> rhs{};
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    double w = 1.0;
    if (s.y_err) {
      const double e = (*s.y_err)[k];
      if (!(e > 0.0)) throw InputError("fit_fringe: y_err entries must be > 0");
      w = 1.0 / (e * e);
    }
    const std::array<double, 3> row{1.0, std::sin(s.x[k]), std::cos(s.x[k])};
    for (std::size_t i = 0; i < 3; ++i) {
      rhs[i] += w * row[i] * s.y[k];
      for (std::size_t j = 0; j < 3; ++j) normal[i][j] += w * row[i] * row[j];
    }
  }

  std::array<double, 3> sol{};
  if (!detail::solve3(normal, rhs, sol)) throw DegenerateDesignError("fit_fringe: singular normal matrix");

  FringeFit f;
  f.c = sol[0];
  f.a = sol[1];
  f.b = sol[2];
  f.amplitude = std::hypot(f.a, f.b);
  if (f.amplitude == 0.0) {
    f.visibility = 0.0;
  } else {
    f.visibility = f.c > 0.0 ? f.amplitude / f.c : std::numeric_limits<double>::infinity();
  }
  f.phase = std::atan2(f.b, f.a);

  double ss = 0.0;
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    const double r = s.y[k] - (f.c + f.a * std::sin(s.x[k]) + f.b * std::cos(s.x[k]));
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / static_cast<double>(s.x.size()));

  const auto [lo, hi] = std::minmax_element(s.y.begin(), s.y.end());
  f.raw_visibility = (*hi + *lo) > 0.0 ? (*hi - *lo) / (*hi + *lo) : 0.0;
  return f;
}

[[nodiscard]] inline TestOutcome flatness_test(const ScanSeries& s, double threshold) {
  if (!(threshold > 0.0)) throw InputError("flatness_test: threshold must be > 0");
  const FringeFit f = fit_fringe(s);
  return {f.visibility <= threshold, f.visibility};
}

/// Passes iff max |y01 + y02 - 1| <= tol over the shared grid.
[[nodiscard]] inline TestOutcome complementarity_test(const ScanSeries& s01, const ScanSeries& s02, double tol) {
  if (s01.x != s02.x || s01.y.size() != s01.x.size() || s02.y.size() != s02.x.size()) {
    throw InputError("complementarity_test: series must share the same x grid");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < s01.y.size(); ++k) worst = std::max(worst, std::abs(s01.y[k] + s02.y[k] - 1.0));
  return {worst <= tol, worst};
}

}  // namespace eraser
