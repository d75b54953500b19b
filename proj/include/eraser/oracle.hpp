#pragma once

// Closed-form ensemble averages and a deterministic-grid brute-force
// evaluator. The brute-force path shares only the per-pair formula layer
// (local_intensity, coincidence_values) with the Monte-Carlo engine; it never
// touches the random sampler.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "eraser/core.hpp"
#include "eraser/correlator.hpp"
#include "eraser/ensemble.hpp"

namespace eraser {

enum class Observable { I10, I21, I22, R01, R02, R03, R04 };

inline constexpr std::array<Observable, 7> kAllObservables = {
    Observable::I10, Observable::I21, Observable::I22, Observable::R01,
    Observable::R02, Observable::R03, Observable::R04};

[[nodiscard]] inline std::string_view to_string(Observable o) noexcept {
  switch (o) {
    case Observable::I10: return "I10";
    case Observable::I21: return "I21";
    case Observable::I22: return "I22";
    case Observable::R01: return "R01";
    case Observable::R02: return "R02";
    case Observable::R03: return "R03";
    case Observable::R04: return "R04";
  }
  return "?";
}

[[nodiscard]] inline Observable parse_observable(std::string_view s) {
  for (Observable o : kAllObservables) {
    if (to_string(o) == s) return o;
  }
  throw InputError("unknown observable id: " + std::string(s));
}

/// Measurement mode in which an observable is recorded.
[[nodiscard]] constexpr MeasurementMode mode_for(Observable o) noexcept {
  switch (o) {
    case Observable::R03: return MeasurementMode::WhichWayB;
    case Observable::R04: return MeasurementMode::WhichWayA;
    default: return MeasurementMode::Eraser;
  }
}

/// Ensemble-averaged closed forms, in units of I0 (I-series) or I0^2
/// (R-series).
[[nodiscard]] inline double analytic_value(Observable o, double phi, double psi) {
  switch (o) {
    case Observable::I10:
    case Observable::I21:
    case Observable::I22: return 1.0;
    case Observable::R01: return 0.5 * (1.0 - std::sin(phi + psi));
    case Observable::R02: return 0.5 * (1.0 + std::sin(phi + psi));
    case Observable::R03:
    case Observable::R04: return 0.25;
  }
  throw InputError("analytic_value: unknown observable");
}

[[nodiscard]] inline double analytic_value(std::string_view id, double phi, double psi) {
  return analytic_value(parse_observable(id), phi, psi);
}

/// The five closed-form curves as callables.
struct AnalyticCurves {
  [[nodiscard]] static double i10(double /*phi*/) noexcept { return 1.0; }
  [[nodiscard]] static double r01(double phi, double psi) noexcept { return 0.5 * (1.0 - std::sin(phi + psi)); }
  [[nodiscard]] static double r02(double phi, double psi) noexcept { return 0.5 * (1.0 + std::sin(phi + psi)); }
  [[nodiscard]] static double r03() noexcept { return 0.25; }
  [[nodiscard]] static double r04() noexcept { return 0.25; }
};

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature
// ---------------------------------------------------------------------------

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights for integral of exp(-x^2) f(x), via Newton iteration on
/// the orthonormal Hermite recurrence (Numerical Recipes' gauher).
[[nodiscard]] inline QuadratureRule gauss_hermite(std::size_t n) {
  if (n < 1) throw InputError("gauss_hermite: n must be >= 1");
  constexpr double kPiM4 = 0.7511255444649425;  // pi^(-1/4)
  constexpr int kMaxIter = 100;
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nd, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < kMaxIter; ++iter) {
      double p1 = kPiM4;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Brute-force expectation
// ---------------------------------------------------------------------------

namespace detail {
[[nodiscard]] inline double per_pair_value(Observable o, const PhotonPairSample& s, const SetupConfig& cfg) {
  switch (o) {
    case Observable::I10: return local_intensity(s, cfg).i10;
    case Observable::I21: return local_intensity(s, cfg).i21;
    case Observable::I22: return local_intensity(s, cfg).i22;
    case Observable::R01: return coincidence_values(s, cfg).r01;
    case Observable::R02: return coincidence_values(s, cfg).r02;
    case Observable::R03: return coincidence_values(s, cfg).r03;
    case Observable::R04: return coincidence_values(s, cfg).r04;
  }
  throw InputError("per_pair_value: unknown observable");
}
}  // namespace detail

/// Averages the per-pair value of `o` over a tensor grid: eta on grid_n
/// uniform points of [0, 2pi), delta_f on grid_n Gauss-Hermite nodes of the
/// Gaussian with FWHM config.delta. Global phases are held at zero. The mode
/// is taken from the observable, not from `config`.
[[nodiscard]] inline double brute_force_expectation(Observable o, const SetupConfig& config, std::size_t grid_n) {
  if (grid_n < 8) throw InputError("brute_force_expectation: grid_n must be >= 8");
  SetupConfig cfg = config;
  cfg.mode = mode_for(o);

  // Integral of N(0, sigma^2) f = (1/sqrt pi) sum w_k f(sqrt2 sigma x_k).
  const QuadratureRule gh = gauss_hermite(grid_n);
  const double sigma = fwhm_to_sigma(config.delta);
  std::vector<double> rows(grid_n);
  for (std::size_t k = 0; k < grid_n; ++k) {
    PhotonPairSample s;
    s.delta_f = std::numbers::sqrt2 * sigma * gh.nodes[k];
    double row = 0.0;
    for (std::size_t e = 0; e < grid_n; ++e) {
      s.eta = kTwoPi * static_cast<double>(e) / static_cast<double>(grid_n);
      row += detail::per_pair_value(o, s, cfg);
    }
    rows[k] = gh.weights[k] * row / static_cast<double>(grid_n);
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total / std::sqrt(std::numbers::pi);
}

/// Grid average of the selected (cross-labelled) share of the total product
/// weight, over all live idler detectors of `config.mode`.
[[nodiscard]] inline double brute_force_kept_fraction(const SetupConfig& config, std::size_t grid_n) {
  if (grid_n < 8) throw InputError("brute_force_kept_fraction: grid_n must be >= 8");
  const QuadratureRule gh = gauss_hermite(grid_n);
  const double sigma = fwhm_to_sigma(config.delta);
  const auto live = detail::live_idlers(config.mode);
  double total = 0.0;
  for (std::size_t k = 0; k < grid_n; ++k) {
    PhotonPairSample s;
    s.delta_f = std::numbers::sqrt2 * sigma * gh.nodes[k];
    double row = 0.0;
    for (std::size_t e = 0; e < grid_n; ++e) {
      s.eta = kTwoPi * static_cast<double>(e) / static_cast<double>(grid_n);
      for (Detector d : live) {
        const SelectedCoincidence sel = select_cross_terms(full_product_expansion(s, config, d), 1.0);
        row += sel.kept_weight / (sel.kept_weight + sel.dropped_weight) / static_cast<double>(live.size());
      }
    }
    total += gh.weights[k] * row / static_cast<double>(grid_n);
  }
  return total / std::sqrt(std::numbers::pi);
}

}  // namespace eraser
