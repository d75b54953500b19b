#pragma once

// Phase scans: per-point evaluation with the analytic and/or Monte-Carlo
// engines, plus the summary tests run over the finished scan.
//
// Column semantics:
//   i10, i21, i22   Monte-Carlo ensemble means when the Monte-Carlo engine is
//                   enabled, closed-form values otherwise.
//   r01 .. r04      closed-form values when the analytic engine is enabled,
//                   rates estimated from the event tally otherwise.
//   n01 .. n_pairs  Monte-Carlo event tally (absent for the analytic engine).
// Observables whose detectors are not live in the selected mode are absent.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eraser/analysis.hpp"
#include "eraser/correlator.hpp"
#include "eraser/ensemble.hpp"
#include "eraser/oracle.hpp"
#include "eraser/random.hpp"
#include "eraser/run_config.hpp"

namespace eraser {

inline constexpr double kFlatnessThreshold = 0.02;
inline constexpr double kAnalyticComplementarityTol = 1e-12;
inline constexpr double kMonteCarloComplementarityTol = 0.02;
inline constexpr double kBinomialSigmas = 3.0;

struct ScanRow {
  std::uint64_t index = 0;
  double phase_rad = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  std::optional<double> i10, i21, i22, r01, r02, r03, r04;
  std::optional<std::uint64_t> n01, n02, n03, n04, n_lost, n_pairs;
};

struct NamedFit {
  std::string column;
  std::optional<FringeFit> fit;
  std::string error;  // set when the fit could not be computed
};

struct NamedTest {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct ScanSummary {
  std::vector<NamedFit> fits;
  std::vector<NamedTest> tests;
  std::optional<double> loss_fraction;
  std::optional<CoherenceReport> coherence;
  bool all_passed = true;
};

struct ScanResult {
  RunConfig config;
  std::vector<ScanRow> rows;
  ScanSummary summary;
};

/// Phase of scan point k on [scan_start, scan_end).
[[nodiscard]] inline double scan_phase(const RunConfig& cfg, std::uint64_t k) noexcept {
  return cfg.scan_start +
         (cfg.scan_end - cfg.scan_start) * static_cast<double>(k) / static_cast<double>(cfg.scan_points);
}

[[nodiscard]] inline SetupConfig setup_at(const RunConfig& cfg, double x) noexcept {
  SetupConfig s;
  s.delta = cfg.delta;
  s.tau = cfg.tau;
  s.mode = cfg.mode;
  s.phi = cfg.fixed_phi;
  s.psi = cfg.fixed_psi;
  switch (cfg.scan) {
    case ScanAxis::Phi: s.phi = x; break;
    case ScanAxis::Psi: s.psi = x; break;
    case ScanAxis::Joint:
      s.phi = cfg.fixed_phi + x;
      s.psi = cfg.fixed_psi - x;
      break;
  }
  return s;
}

[[nodiscard]] inline ScanRow evaluate_point(const RunConfig& cfg, std::uint64_t k, unsigned workers) {
  ScanRow row;
  row.index = k;
  row.phase_rad = scan_phase(cfg, k);
  const SetupConfig setup = setup_at(cfg, row.phase_rad);
  row.phi = setup.phi;
  row.psi = setup.psi;
  const bool eraser = cfg.mode == MeasurementMode::Eraser;

  if (cfg.uses_analytic()) {
    row.i10 = analytic_value(Observable::I10, setup.phi, setup.psi);
    if (eraser) {
      row.i21 = analytic_value(Observable::I21, setup.phi, setup.psi);
      row.i22 = analytic_value(Observable::I22, setup.phi, setup.psi);
      row.r01 = analytic_value(Observable::R01, setup.phi, setup.psi);
      row.r02 = analytic_value(Observable::R02, setup.phi, setup.psi);
    } else if (cfg.mode == MeasurementMode::WhichWayB) {
      row.r03 = analytic_value(Observable::R03, setup.phi, setup.psi);
    } else {
      row.r04 = analytic_value(Observable::R04, setup.phi, setup.psi);
    }
  }

  if (cfg.uses_montecarlo()) {
    const EnsembleSpec spec{cfg.pairs, random::derive_seed(cfg.seed, k), cfg.delta};
    const LocalIntensities means = mean_local_intensities(spec, setup, workers);
    row.i10 = means.i10;
    if (eraser) {
      row.i21 = means.i21;
      row.i22 = means.i22;
    }
    const EventTally t = monte_carlo_run(spec, setup, workers);
    row.n_lost = t.n_lost;
    row.n_pairs = t.n_pairs;
    const CoincidenceValues est = rates_from_tally(t, cfg.mode);
    switch (cfg.mode) {
      case MeasurementMode::Eraser:
        row.n01 = t.n01;
        row.n02 = t.n02;
        if (!cfg.uses_analytic()) {
          row.r01 = est.r01;
          row.r02 = est.r02;
        }
        break;
      case MeasurementMode::WhichWayB:
        row.n03 = t.n03;
        if (!cfg.uses_analytic()) row.r03 = est.r03;
        break;
      case MeasurementMode::WhichWayA:
        row.n04 = t.n04;
        if (!cfg.uses_analytic()) row.r04 = est.r04;
        break;
    }
  }
  return row;
}

namespace detail {

template <typename Get>
[[nodiscard]] std::optional<ScanSeries> series_of(const std::vector<ScanRow>& rows, Get get) {
  ScanSeries s;
  for (const ScanRow& r : rows) {
    const std::optional<double> v = get(r);
    if (!v) return std::nullopt;
    s.x.push_back(r.phase_rad);
    s.y.push_back(*v);
  }
  return s;
}

inline void add_test(ScanSummary& sum, std::string name, bool pass, double measured, double threshold) {
  sum.tests.push_back({std::move(name), pass, measured, threshold});
  sum.all_passed = sum.all_passed && pass;
}

}  // namespace detail

[[nodiscard]] inline ScanSummary summarize(const RunConfig& cfg, const std::vector<ScanRow>& rows) {
  ScanSummary sum;

  struct Column {
    const char* name;
    std::optional<double> ScanRow::*member;
  };
  static constexpr Column kColumns[] = {
      {"i10", &ScanRow::i10}, {"i21", &ScanRow::i21}, {"i22", &ScanRow::i22}, {"r01", &ScanRow::r01},
      {"r02", &ScanRow::r02}, {"r03", &ScanRow::r03}, {"r04", &ScanRow::r04}};

  for (const Column& col : kColumns) {
    const auto s = detail::series_of(rows, [&](const ScanRow& r) { return r.*col.member; });
    if (!s) continue;
    NamedFit nf{col.name, std::nullopt, {}};
    try {
      nf.fit = fit_fringe(*s);
    } catch (const std::exception& e) {
      nf.error = e.what();
    }
    // Local intensities and which-way coincidences must be flat.
    const std::string name = col.name;
    if (name != "r01" && name != "r02") {
      if (nf.fit) {
        detail::add_test(sum, "flatness_" + name, nf.fit->visibility <= kFlatnessThreshold, nf.fit->visibility,
                         kFlatnessThreshold);
      }
    }
    sum.fits.push_back(std::move(nf));
  }

  if (cfg.mode == MeasurementMode::Eraser) {
    const auto s01 = detail::series_of(rows, [](const ScanRow& r) { return r.r01; });
    const auto s02 = detail::series_of(rows, [](const ScanRow& r) { return r.r02; });
    if (s01 && s02) {
      const double tol = cfg.uses_analytic() ? kAnalyticComplementarityTol : kMonteCarloComplementarityTol;
      const TestOutcome t = complementarity_test(*s01, *s02, tol);
      detail::add_test(sum, "complementarity", t.pass, t.measured, tol);
    }
    if (cfg.uses_montecarlo() && cfg.uses_analytic()) {
      // Event-tally estimates must also sum to one.
      double worst = 0.0;
      for (const ScanRow& r : rows) {
        const double n = static_cast<double>(*r.n_pairs);
        worst = std::max(worst, std::abs(2.0 * static_cast<double>(*r.n01 + *r.n02) / n - 1.0));
      }
      detail::add_test(sum, "complementarity_montecarlo", worst <= kMonteCarloComplementarityTol, worst,
                       kMonteCarloComplementarityTol);
    }
  }

  if (cfg.uses_montecarlo() && cfg.mode != MeasurementMode::Eraser) {
    // Which-way coincidences: each point within k sigma of p = 1/2.
    double worst_sigmas = 0.0;
    for (const ScanRow& r : rows) {
      const double n = static_cast<double>(*r.n_pairs);
      const double hits = static_cast<double>(cfg.mode == MeasurementMode::WhichWayB ? *r.n03 : *r.n04);
      worst_sigmas = std::max(worst_sigmas, std::abs(hits / n - 0.5) / std::sqrt(0.25 / n));
    }
    detail::add_test(sum, "whichway_binomial_sigmas", worst_sigmas <= kBinomialSigmas, worst_sigmas,
                     kBinomialSigmas);
  }

  if (cfg.uses_montecarlo()) {
    std::uint64_t lost = 0, total = 0;
    for (const ScanRow& r : rows) {
      lost += *r.n_lost;
      total += *r.n_pairs;
    }
    const double frac = static_cast<double>(lost) / static_cast<double>(total);
    sum.loss_fraction = frac;
    const double bound = kBinomialSigmas * std::sqrt(0.25 / static_cast<double>(total));
    detail::add_test(sum, "loss_fraction", std::abs(frac - 0.5) <= bound, std::abs(frac - 0.5), bound);
  }

  if (cfg.delta > 0.0) {
    sum.coherence = coherence_report(EnsembleSpec{cfg.pairs, cfg.seed, cfg.delta}, cfg.gamma_ratio);
  }
  return sum;
}

/// Evaluates every scan point in order. Worker count defaults to
/// ERASER_SIM_THREADS; it never changes results.
[[nodiscard]] inline ScanResult compute_scan(const RunConfig& cfg, unsigned workers = parallel::worker_count()) {
  validate(cfg);
  ScanResult res;
  res.config = cfg;
  res.rows.reserve(cfg.scan_points);
  for (std::uint64_t k = 0; k < cfg.scan_points; ++k) res.rows.push_back(evaluate_point(cfg, k, workers));
  res.summary = summarize(cfg, res.rows);
  return res;
}

}  // namespace eraser
