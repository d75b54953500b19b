#pragma once

// Local intensities and selective coincidence rates, per pair and as
// ensemble averages / Monte-Carlo event tallies.
//
// A coincidence between D0 and an idler detector expands into four path
// product bases {AA, AB, BA, BB} (signal label first). Coincidence gating on
// orthogonally polarized pairs keeps only the cross-labelled bases V_A H_B
// and V_B H_A, which superpose coherently; the same-label bases are lost.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "eraser/core.hpp"
#include "eraser/ensemble.hpp"
#include "eraser/optics.hpp"
#include "eraser/parallel.hpp"
#include "eraser/random.hpp"

namespace eraser {

/// Relative sign of the V_B H_A basis in the selected superposition. With -1,
/// D1 is dark at phi + psi = pi/2 and the D0-D1 fringe is
/// (1 - sin(phi + psi)) / 2, the published form; +1 swaps the D1 and D2
/// fringes. Nothing else depends on this choice.
inline constexpr double kSelectedBasisSign = -1.0;

enum class PathLabel { A, B };

struct LocalIntensities {
  double i10 = 0.0;
  double i21 = 0.0;
  double i22 = 0.0;
  double i23 = 0.0;
  double i24 = 0.0;
};

struct CoincidenceValues {
  double r01 = 0.0;
  double r02 = 0.0;
  double r03 = 0.0;
  double r04 = 0.0;
  double discarded_weight = 0.0;  // per-pair probability of a dropped same-label outcome
};

struct ProductTerm {
  PathLabel signal;
  PathLabel idler;
  Complex amplitude;

  [[nodiscard]] bool cross_labelled() const noexcept { return signal != idler; }
};

using ProductExpansion = std::array<ProductTerm, 4>;  // AA, AB, BA, BB

struct EventTally {
  std::uint64_t n01 = 0;
  std::uint64_t n02 = 0;
  std::uint64_t n03 = 0;
  std::uint64_t n04 = 0;
  std::uint64_t n_lost = 0;
  std::uint64_t n_pairs = 0;

  EventTally& operator+=(const EventTally& o) noexcept {
    n01 += o.n01;
    n02 += o.n02;
    n03 += o.n03;
    n04 += o.n04;
    n_lost += o.n_lost;
    n_pairs += o.n_pairs;
    return *this;
  }
  friend bool operator==(const EventTally&, const EventTally&) = default;
};

// ---------------------------------------------------------------------------
// Per-pair values
// ---------------------------------------------------------------------------

namespace detail {
// Intensity at the detector, where both path labels land on the same mode.
[[nodiscard]] inline double detected_intensity(const PathState& s, double i0) noexcept {
  return s.prefactor * s.prefactor * std::norm(s.coeff_a + s.coeff_b) / i0;
}

[[nodiscard]] inline std::vector<Detector> live_idlers(MeasurementMode mode) {
  switch (mode) {
    case MeasurementMode::Eraser: return {Detector::D1, Detector::D2};
    case MeasurementMode::WhichWayB: return {Detector::D3};
    case MeasurementMode::WhichWayA: return {Detector::D4};
  }
  return {};
}
}  // namespace detail

[[nodiscard]] inline LocalIntensities local_intensity(const PhotonPairSample& sample, const SetupConfig& config) {
  const DetectorAmplitudes amp = build_amplitudes(sample, config);
  const double i0 = config.e0 * config.e0;
  return {detail::detected_intensity(amp.e10, i0), detail::detected_intensity(amp.e21, i0),
          detail::detected_intensity(amp.e22, i0), detail::detected_intensity(amp.e23, i0),
          detail::detected_intensity(amp.e24, i0)};
}

[[nodiscard]] inline ProductExpansion expand_product(const PathState& signal, const PathState& idler) noexcept {
  const double pref = signal.prefactor * idler.prefactor;
  return {{
      {PathLabel::A, PathLabel::A, pref * signal.coeff_a * idler.coeff_a},
      {PathLabel::A, PathLabel::B, pref * signal.coeff_a * idler.coeff_b},
      {PathLabel::B, PathLabel::A, pref * signal.coeff_b * idler.coeff_a},
      {PathLabel::B, PathLabel::B, pref * signal.coeff_b * idler.coeff_b},
  }};
}

/// All four path-product terms of D0 x `idler_detector`, unselected.
[[nodiscard]] inline ProductExpansion full_product_expansion(const PhotonPairSample& sample, const SetupConfig& config,
                                                             Detector idler_detector) {
  if (!is_live(config.mode, idler_detector)) {
    throw InputError("full_product_expansion: idler detector is not live in mode " +
                     std::string(to_string(config.mode)));
  }
  const DetectorAmplitudes amp = build_amplitudes(sample, config);
  return expand_product(amp.e10, amp.idler(idler_detector));
}

/// Outcome of the selective measurement on one product expansion.
struct SelectedCoincidence {
  double rate = 0.0;           // |V_A H_B +/- V_B H_A|^2, units of I0^2
  double kept_weight = 0.0;    // |V_A H_B|^2 + |V_B H_A|^2
  double dropped_weight = 0.0; // |V_A H_A|^2 + |V_B H_B|^2
};

[[nodiscard]] inline SelectedCoincidence select_cross_terms(const ProductExpansion& terms, double i0_sq) noexcept {
  const Complex& ab = terms[1].amplitude;
  const Complex& ba = terms[2].amplitude;
  SelectedCoincidence out;
  out.rate = std::norm(ab + kSelectedBasisSign * ba) / i0_sq;
  out.kept_weight = (std::norm(ab) + std::norm(ba)) / i0_sq;
  out.dropped_weight = (std::norm(terms[0].amplitude) + std::norm(terms[3].amplitude)) / i0_sq;
  return out;
}

[[nodiscard]] inline CoincidenceValues coincidence_values(const PhotonPairSample& sample, const SetupConfig& config) {
  const DetectorAmplitudes amp = build_amplitudes(sample, config);
  const double i0 = config.e0 * config.e0;
  const auto live = detail::live_idlers(config.mode);
  const double branch = 1.0 / static_cast<double>(live.size());

  CoincidenceValues out;
  for (Detector d : live) {
    const SelectedCoincidence sel = select_cross_terms(expand_product(amp.e10, amp.idler(d)), i0 * i0);
    switch (d) {
      case Detector::D1: out.r01 = sel.rate; break;
      case Detector::D2: out.r02 = sel.rate; break;
      case Detector::D3: out.r03 = sel.rate; break;
      case Detector::D4: out.r04 = sel.rate; break;
      case Detector::D0: break;
    }
    out.discarded_weight += branch * sel.dropped_weight / (sel.kept_weight + sel.dropped_weight);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo outcomes
// ---------------------------------------------------------------------------

/// Per-pair outcome probabilities {D01, D02, D03, D04, lost}. Each live idler
/// detector receives an equal share of the pair; within that share the
/// selected-coincidence rate and the dropped weight are normalized by the
/// branch's total product weight.
[[nodiscard]] inline std::array<double, 5> outcome_probabilities(const CoincidenceValues& cv, MeasurementMode mode) {
  std::array<double, 5> p{};
  switch (mode) {
    case MeasurementMode::Eraser:
      p[0] = cv.r01 / 2.0;
      p[1] = cv.r02 / 2.0;
      break;
    case MeasurementMode::WhichWayB: p[2] = cv.r03 * 2.0; break;
    case MeasurementMode::WhichWayA: p[3] = cv.r04 * 2.0; break;
  }
  p[4] = cv.discarded_weight;
  return p;
}

/// Inverse of outcome_probabilities for estimated rates: maps event fractions
/// back to coincidence rates in units of I0^2 (lost fraction goes to
/// discarded_weight).
[[nodiscard]] inline CoincidenceValues rates_from_tally(const EventTally& t, MeasurementMode mode) {
  if (t.n_pairs == 0) throw InputError("rates_from_tally: empty tally");
  const double n = static_cast<double>(t.n_pairs);
  CoincidenceValues out;
  switch (mode) {
    case MeasurementMode::Eraser:
      out.r01 = 2.0 * static_cast<double>(t.n01) / n;
      out.r02 = 2.0 * static_cast<double>(t.n02) / n;
      break;
    case MeasurementMode::WhichWayB: out.r03 = 0.5 * static_cast<double>(t.n03) / n; break;
    case MeasurementMode::WhichWayA: out.r04 = 0.5 * static_cast<double>(t.n04) / n; break;
  }
  out.discarded_weight = static_cast<double>(t.n_lost) / n;
  return out;
}

/// Picks an outcome index for a uniform draw u in [0, 1). Zero-probability
/// outcomes are never chosen.
[[nodiscard]] inline std::size_t draw_outcome(const std::array<double, 5>& p, double u) noexcept {
  double total = 0.0;
  for (double x : p) total += x;
  double cum = 0.0;
  std::size_t last_nonzero = p.size() - 1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    last_nonzero = k;
    cum += p[k];
    if (u * total < cum) return k;
  }
  return last_nonzero;
}

[[nodiscard]] inline EventTally monte_carlo_run(const EnsembleSpec& spec, const SetupConfig& config,
                                                unsigned workers = parallel::worker_count()) {
  detail::validate(spec);
  const auto blocks = parallel::map_blocks<EventTally>(
      spec.n_pairs,
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        EventTally t;
        for (std::uint64_t j = begin; j < end; ++j) {
          const PhotonPairSample s = sample_pair(spec, j);
          const auto p = outcome_probabilities(coincidence_values(s, config), config.mode);
          const double u = random::uniform01(spec.seed, j, detail::kOutcome);
          switch (draw_outcome(p, u)) {
            case 0: ++t.n01; break;
            case 1: ++t.n02; break;
            case 2: ++t.n03; break;
            case 3: ++t.n04; break;
            default: ++t.n_lost; break;
          }
          ++t.n_pairs;
        }
        return t;
      },
      workers);
  EventTally total;
  for (const auto& b : blocks) total += b;
  return total;
}

// ---------------------------------------------------------------------------
// Ensemble averages
// ---------------------------------------------------------------------------

[[nodiscard]] inline LocalIntensities mean_local_intensities(const EnsembleSpec& spec, const SetupConfig& config,
                                                             unsigned workers = parallel::worker_count()) {
  detail::validate(spec);
  using Sums = std::array<double, 5>;
  const auto blocks = parallel::map_blocks<Sums>(
      spec.n_pairs,
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        Sums acc{};
        for (std::uint64_t j = begin; j < end; ++j) {
          const LocalIntensities li = local_intensity(sample_pair(spec, j), config);
          acc[0] += li.i10;
          acc[1] += li.i21;
          acc[2] += li.i22;
          acc[3] += li.i23;
          acc[4] += li.i24;
        }
        return acc;
      },
      workers);

  std::array<double, 5> mean{};
  std::vector<double> column(blocks.size());
  for (std::size_t f = 0; f < mean.size(); ++f) {
    for (std::size_t b = 0; b < blocks.size(); ++b) column[b] = blocks[b][f];
    mean[f] = parallel::pairwise_sum(column) / static_cast<double>(spec.n_pairs);
  }
  return {mean[0], mean[1], mean[2], mean[3], mean[4]};
}

}  // namespace eraser
