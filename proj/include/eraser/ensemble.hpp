#pragma once

// Pair ensembles: Gaussian (inhomogeneously broadened) detuning with FWHM
// delta, and independent uniform phases.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "eraser/core.hpp"
#include "eraser/random.hpp"

namespace eraser {

struct EnsembleSpec {
  std::uint64_t n_pairs = 1;
  std::uint64_t seed = 42;
  double delta = 1.0;  // FWHM of the detuning distribution
};

struct CoherenceReport {
  double tau_0 = 0.0;      // ensemble coherence time 1/delta
  double tau_j_min = 0.0;  // per-photon coherence time 1/(gamma_ratio*delta)
};

/// FWHM -> standard deviation of a Gaussian.
[[nodiscard]] inline double fwhm_to_sigma(double fwhm) noexcept {
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

namespace detail {
enum Stream : std::uint64_t {
  kDetuningA = 1,
  kDetuningB = 2,
  kEta = 3,
  kZetaS = 4,
  kZetaId = 5,
  kThetaId = 6,
  kOutcome = 7,  // consumed by the Monte-Carlo event sampler
};

[[nodiscard]] inline double uniform_phase(std::uint64_t seed, std::uint64_t index, Stream s) noexcept {
  double v = kTwoPi * random::uniform01(seed, index, s);
  if (v >= kTwoPi) v = std::nextafter(kTwoPi, 0.0);
  return v;
}

inline void validate(const EnsembleSpec& spec) {
  if (spec.n_pairs < 1) throw InputError("ensemble: n_pairs must be >= 1");
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) throw InputError("ensemble: delta must be finite and >= 0");
}
}  // namespace detail

/// Draw for pair `index`. Depends only on (seed, delta, index).
[[nodiscard]] inline PhotonPairSample sample_pair(const EnsembleSpec& spec, std::uint64_t index) {
  detail::validate(spec);
  if (index >= spec.n_pairs) {
    throw InputError("sample_pair: index " + std::to_string(index) + " out of range (n_pairs = " +
                     std::to_string(spec.n_pairs) + ")");
  }
  using namespace detail;
  PhotonPairSample s;
  s.pair_id = index;
  s.delta_f = spec.delta == 0.0
                  ? 0.0
                  : fwhm_to_sigma(spec.delta) * random::standard_normal(spec.seed, index, kDetuningA, kDetuningB);
  s.eta = uniform_phase(spec.seed, index, kEta);
  s.zeta_s = uniform_phase(spec.seed, index, kZetaS);
  s.zeta_id = uniform_phase(spec.seed, index, kZetaId);
  s.theta_id = uniform_phase(spec.seed, index, kThetaId);
  return s;
}

/// Effective (ensemble) versus per-photon coherence time. `gamma_ratio` is the
/// per-photon linewidth as a fraction of delta, in (0, 1].
[[nodiscard]] inline CoherenceReport coherence_report(const EnsembleSpec& spec, double gamma_ratio) {
  if (spec.delta == 0.0) throw UndefinedCoherenceError("coherence_report: zero bandwidth has no coherence time");
  if (!(spec.delta > 0.0)) throw InputError("coherence_report: delta must be > 0");
  if (!(gamma_ratio > 0.0 && gamma_ratio <= 1.0)) throw InputError("coherence_report: gamma_ratio must lie in (0, 1]");
  return {1.0 / spec.delta, 1.0 / (gamma_ratio * spec.delta)};
}

}  // namespace eraser
