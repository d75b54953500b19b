#pragma once

// Detector amplitudes for one photon pair.
//
// Signal to D0 (pol V):
//   E10 = e0/sqrt2 * e^{i zeta_s} (A + e^{i(eta + phi_j)} B)
// Idler through the recombining beam splitter to D1/D2 (pol H), with the
// reflected port picking up a factor i:
//   E21 = e0/sqrt2 * e^{i zeta_id} (A + i e^{i(eta - psi_j)} B)
//   E22 = e0/sqrt2 * e^{i zeta_id} (i A + e^{i(eta - psi_j)} B)
// Idler intercepted for which-way detection (pol H):
//   E23 = e0/sqrt2 * e^{i theta_id} B
//   E24 = e0/sqrt2 * e^{i theta_id} A
//
// The detuning shifts the slit-B term by +delta_f*tau on the signal and
// -delta_f*tau on the idler, so phi_j + psi_j = phi + psi for every pair.

#include <cmath>
#include <numbers>
#include <utility>

#include "eraser/core.hpp"

namespace eraser {

struct PerPhotonPhases {
  double phi_j = 0.0;
  double psi_j = 0.0;
};

struct DetectorAmplitudes {
  PathState e10;
  PathState e21;
  PathState e22;
  PathState e23;
  PathState e24;

  [[nodiscard]] const PathState& idler(Detector d) const {
    switch (d) {
      case Detector::D1: return e21;
      case Detector::D2: return e22;
      case Detector::D3: return e23;
      case Detector::D4: return e24;
      case Detector::D0: break;
    }
    throw InputError("DetectorAmplitudes::idler: D0 is the signal detector");
  }
};

[[nodiscard]] inline PerPhotonPhases per_photon_phases(const PhotonPairSample& sample,
                                                       const SetupConfig& config) noexcept {
  const double shift = sample.delta_f * config.tau;
  return {config.phi + shift, config.psi - shift};
}

[[nodiscard]] inline DetectorAmplitudes build_amplitudes(const PhotonPairSample& sample,
                                                         const SetupConfig& config) {
  const auto [phi_j, psi_j] = per_photon_phases(sample, config);
  const double pref = config.e0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};

  const Complex g_s = phase_factor(sample.zeta_s);
  const Complex g_id = phase_factor(sample.zeta_id);
  const Complex g_ww = phase_factor(sample.theta_id);
  const Complex signal_b = phase_factor(sample.eta + phi_j);
  const Complex idler_b = phase_factor(sample.eta - psi_j);

  DetectorAmplitudes out;
  out.e10 = {Polarization::V, g_s, g_s * signal_b, pref};
  out.e21 = {Polarization::H, g_id, g_id * i * idler_b, pref};
  out.e22 = {Polarization::H, g_id * i, g_id * idler_b, pref};
  out.e23 = {Polarization::H, Complex{}, g_ww, pref};
  out.e24 = {Polarization::H, g_ww, Complex{}, pref};
  return out;
}

/// Balanced beam splitter on the two idler arm modes, with the reflected port
/// picking up a factor i. Returns the (D1, D2) output mode amplitudes; the map
/// is unitary. E21 and E22 hold the two addends of each output, path label by
/// path label, before the 1/sqrt2 splitting factor.
[[nodiscard]] inline std::pair<Complex, Complex> beam_splitter(Complex arm_a, Complex arm_b) noexcept {
  const Complex i{0.0, 1.0};
  return {(arm_a + i * arm_b) / std::numbers::sqrt2, (i * arm_a + arm_b) / std::numbers::sqrt2};
}

}  // namespace eraser
