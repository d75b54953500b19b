#pragma once

// Shared value types and conventions for the eraser simulator.
//
// Units: E0 = 1, so intensities are in units of I0 = |E0|^2 and coincidence
// rates in units of I0^2. Detunings are dimensionless; only the product
// delta_f * tau (radians) ever enters a formula.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eraser {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Malformed or out-of-range argument to a library call.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Coherence time requested for a zero-bandwidth ensemble.
struct UndefinedCoherenceError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Fringe fit with fewer than three distinct abscissae.
struct UnderdeterminedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fringe fit whose normal matrix is numerically singular.
struct DegenerateDesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class Polarization { H, V };

/// Which idler detectors are live.
enum class MeasurementMode {
  Eraser,     // D1, D2 behind the recombining beam splitter
  WhichWayB,  // D3, slit-B path only
  WhichWayA,  // D4, slit-A path only
};

enum class Detector { D0, D1, D2, D3, D4 };

/// One SPDC pair's random draws. All phases are in [0, 2pi).
///
/// The signal carries detuning +delta_f and the idler -delta_f, so the pair's
/// detunings always sum to zero.
struct PhotonPairSample {
  std::uint64_t pair_id = 0;
  double delta_f = 0.0;
  double eta = 0.0;       // slit-B relative phase, shared by both photons
  double zeta_s = 0.0;    // signal global phase
  double zeta_id = 0.0;   // idler global phase (eraser arm)
  double theta_id = 0.0;  // idler global phase (which-way arms)

  [[nodiscard]] constexpr double signal_detuning() const noexcept { return delta_f; }
  [[nodiscard]] constexpr double idler_detuning() const noexcept { return -delta_f; }
};

/// Experiment knobs shared by every pair of an ensemble.
struct SetupConfig {
  double delta = 1.0;  // spectral FWHM
  double tau = 1.0;    // delay t_s - t_id
  double phi = 0.0;    // D0 transverse-scan phase
  double psi = 0.0;    // beam-splitter scan phase
  MeasurementMode mode = MeasurementMode::Eraser;
  double e0 = 1.0;     // single-photon amplitude; fixed at 1
};

/// A detector-bound amplitude: prefactor * (coeff_a |A> + coeff_b |B>) with a
/// polarization tag. Global phases are folded into the coefficients.
struct PathState {
  Polarization pol = Polarization::H;
  Complex coeff_a{};
  Complex coeff_b{};
  double prefactor = 1.0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// e^{i angle}. Throws InputError for NaN or infinite input.
[[nodiscard]] inline Complex phase_factor(double angle) {
  if (!std::isfinite(angle)) throw InputError("phase_factor: non-finite angle");
  return {std::cos(angle), std::sin(angle)};
}

[[nodiscard]] inline double state_norm_sq(const PathState& s) noexcept {
  return s.prefactor * s.prefactor * (std::norm(s.coeff_a) + std::norm(s.coeff_b));
}

/// Wraps an angle onto [0, 2pi).
[[nodiscard]] inline double wrap_phase(double angle) noexcept {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

[[nodiscard]] constexpr bool is_live(MeasurementMode mode, Detector d) noexcept {
  switch (mode) {
    case MeasurementMode::Eraser: return d == Detector::D1 || d == Detector::D2;
    case MeasurementMode::WhichWayB: return d == Detector::D3;
    case MeasurementMode::WhichWayA: return d == Detector::D4;
  }
  return false;
}

[[nodiscard]] inline std::string_view to_string(MeasurementMode m) noexcept {
  switch (m) {
    case MeasurementMode::Eraser: return "eraser";
    case MeasurementMode::WhichWayB: return "whichway-b";
    case MeasurementMode::WhichWayA: return "whichway-a";
  }
  return "?";
}

[[nodiscard]] inline MeasurementMode parse_mode(std::string_view s) {
  if (s == "eraser") return MeasurementMode::Eraser;
  if (s == "whichway-b") return MeasurementMode::WhichWayB;
  if (s == "whichway-a") return MeasurementMode::WhichWayA;
  throw InputError("unknown measurement mode: " + std::string(s));
}

}  // namespace eraser
