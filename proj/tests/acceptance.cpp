// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Optional argv[1]: path to the eraser_sim binary, used to
// check byte-determinism of the CLI end to end.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eraser/eraser.hpp"
#include "eraser/output.hpp"
#include "eraser/scan.hpp"

namespace {

using namespace eraser;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kPairs = 100000;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%s  AC%d %-34s (%.2fs)%s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              v.detail.str().c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SetupConfig setup(double phi, double psi, MeasurementMode mode = MeasurementMode::Eraser, double delta = 1.0) {
  SetupConfig c;
  c.phi = phi;
  c.psi = psi;
  c.mode = mode;
  c.delta = delta;
  return c;
}

RunConfig scan_config(MeasurementMode mode, Engine engine, std::uint64_t points, double delta = 1.0) {
  RunConfig c;
  c.mode = mode;
  c.engine = engine;
  c.scan_points = points;
  c.pairs = kPairs;
  c.delta = delta;
  c.out_path = "unused";
  return c;
}

ScanSeries column(const std::vector<ScanRow>& rows, const std::function<double(const ScanRow&)>& get) {
  ScanSeries s;
  for (const ScanRow& r : rows) {
    s.x.push_back(r.phase_rad);
    s.y.push_back(get(r));
  }
  return s;
}

double rate_hat(std::uint64_t count, std::uint64_t n) { return 2.0 * double(count) / double(n); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";

  // Shared Monte-Carlo eraser scan: 32 phi points, 1e5 pairs per point.
  std::vector<ScanRow> eraser_mc;
  double eraser_mc_secs = 0.0;
  {
    const auto t0 = Clock::now();
    eraser_mc = compute_scan(scan_config(MeasurementMode::Eraser, Engine::Both, 32)).rows;
    eraser_mc_secs = seconds_since(t0);
  }

  criterion(1, "eraser fringe (analytic)", [](Verdict& v) {
    const auto t0 = Clock::now();
    RunConfig c = scan_config(MeasurementMode::Eraser, Engine::Analytic, 100);
    c.fixed_psi = 0.3;
    c.scan = ScanAxis::Phi;
    const ScanResult res = compute_scan(c);
    double worst = 0.0, worst_per_pair = 0.0;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (const ScanRow& r : res.rows) {
      const double expected = 0.5 * (1.0 - std::sin(r.phi + r.psi));
      worst = std::max(worst, std::abs(*r.r01 - expected));
      // Same value from the amplitude-level selective measurement.
      PhotonPairSample s;
      s.eta = ph(rng);
      s.delta_f = ph(rng) - 3.0;
      worst_per_pair = std::max(worst_per_pair, std::abs(coincidence_values(s, setup(r.phi, r.psi)).r01 - expected));
    }
    const FringeFit f = fit_fringe(column(res.rows, [](const ScanRow& r) { return *r.r01; }));
    const double secs = seconds_since(t0);
    v.detail << " max|r01-(1-sin)/2|=" << worst << " per-pair=" << worst_per_pair << " V=" << f.visibility;
    v.require(worst < 1e-12, "analytic deviation < 1e-12");
    v.require(worst_per_pair < 1e-12, "per-pair deviation < 1e-12");
    v.require(std::abs(f.visibility - 1.0) < 1e-9, "|V - 1| < 1e-9");
    v.require(secs < 1.0, "runtime < 1 s");
  });

  criterion(2, "complementarity", [&](Verdict& v) {
    double analytic = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double phi = kTwoPi * k / 100.0;
      analytic = std::max(analytic, std::abs(analytic_value(Observable::R01, phi, 0.7) +
                                             analytic_value(Observable::R02, phi, 0.7) - 1.0));
    }
    double mc = 0.0;
    for (const ScanRow& r : eraser_mc) mc = std::max(mc, std::abs(rate_hat(*r.n01, *r.n_pairs) + rate_hat(*r.n02, *r.n_pairs) - 1.0));
    v.detail << " analytic=" << analytic << " montecarlo=" << mc << " scan=" << eraser_mc_secs << "s";
    v.require(analytic < 1e-12, "analytic < 1e-12");
    v.require(mc < 0.02, "Monte-Carlo < 0.02");
    v.require(eraser_mc_secs < 60.0, "32-point scan < 60 s");
  });

  criterion(3, "local uniformity", [&](Verdict& v) {
    const double v10 = fit_fringe(column(eraser_mc, [](const ScanRow& r) { return *r.i10; })).visibility;
    const double v21 = fit_fringe(column(eraser_mc, [](const ScanRow& r) { return *r.i21; })).visibility;
    const double v22 = fit_fringe(column(eraser_mc, [](const ScanRow& r) { return *r.i22; })).visibility;
    v.detail << " V(i10)=" << v10 << " V(i21)=" << v21 << " V(i22)=" << v22;
    v.require(v10 <= 0.02 && v21 <= 0.02 && v22 <= 0.02, "visibility <= 0.02");
  });

  criterion(4, "which-way flatness", [](Verdict& v) {
    bool exact = true;
    double per_pair = 0.0;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (int k = 0; k < 1000; ++k) {
      const double phi = ph(rng), psi = ph(rng);
      exact = exact && analytic_value(Observable::R03, phi, psi) == 0.25 &&
              analytic_value(Observable::R04, phi, psi) == 0.25;
      PhotonPairSample s;
      s.eta = ph(rng);
      s.delta_f = ph(rng);
      per_pair = std::max({per_pair, std::abs(coincidence_values(s, setup(phi, psi, MeasurementMode::WhichWayB)).r03 - 0.25),
                           std::abs(coincidence_values(s, setup(phi, psi, MeasurementMode::WhichWayA)).r04 - 0.25)});
    }
    double worst_sigmas = 0.0;
    for (MeasurementMode m : {MeasurementMode::WhichWayB, MeasurementMode::WhichWayA}) {
      const auto rows = compute_scan(scan_config(m, Engine::Both, 12)).rows;
      for (const ScanRow& r : rows) {
        const double n = double(*r.n_pairs);
        const double hits = double(m == MeasurementMode::WhichWayB ? *r.n03 : *r.n04);
        worst_sigmas = std::max(worst_sigmas, std::abs(hits / n - 0.5) / std::sqrt(0.25 / n));
      }
    }
    v.detail << " analytic exact=" << (exact ? "yes" : "no") << " per-pair dev=" << per_pair << " worst MC deviation=" << worst_sigmas << " sigma";
    v.require(exact, "r03 = r04 = 0.25 exactly");
    v.require(per_pair <= 1e-15, "per-pair rate within 1e-15 of 0.25");
    v.require(worst_sigmas <= 3.0, "within 3 sigma");
  });

  criterion(5, "selection loss", [](Verdict& v) {
    double worst = 0.0;
    const double bound = 3.0 * std::sqrt(0.25 / double(kPairs));
    for (MeasurementMode m : {MeasurementMode::Eraser, MeasurementMode::WhichWayB, MeasurementMode::WhichWayA}) {
      const EventTally t = monte_carlo_run(EnsembleSpec{kPairs, 5, 1.0}, setup(0.9, 0.2, m));
      worst = std::max(worst, std::abs(double(t.n_lost) / double(t.n_pairs) - 0.5));
    }
    double kept_dev = 0.0;
    for (MeasurementMode m : {MeasurementMode::Eraser, MeasurementMode::WhichWayB, MeasurementMode::WhichWayA}) {
      kept_dev = std::max(kept_dev, std::abs(brute_force_kept_fraction(setup(0.9, 0.2, m), 64) - 0.5));
    }
    v.detail << " max|lost/n-0.5|=" << worst << " (bound " << bound << ") kept-ratio dev=" << kept_dev;
    v.require(worst <= bound, "loss within 3 sigma of 0.5");
    v.require(kept_dev <= 1e-15, "brute-force kept ratio = 0.5");
  });

  criterion(6, "nuisance independence", [](Verdict& v) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi), det(-20.0, 20.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      SetupConfig c = setup(ph(rng), ph(rng));
      c.tau = 1.3;
      PhotonPairSample a{0, det(rng), ph(rng), ph(rng), ph(rng), ph(rng)};
      const PhotonPairSample b{0, det(rng), ph(rng), ph(rng), ph(rng), ph(rng)};
      const CoincidenceValues ca = coincidence_values(a, c), cb = coincidence_values(b, c);
      worst = std::max({worst, std::abs(ca.r01 - cb.r01), std::abs(ca.r02 - cb.r02)});
    }
    auto mc_visibility = [](double delta) {
      ScanSeries s;
      for (int k = 0; k < 32; ++k) {
        const double phi = kTwoPi * k / 32.0;
        const EventTally t = monte_carlo_run(EnsembleSpec{kPairs, random::derive_seed(66, k), delta}, setup(phi, 0.0, MeasurementMode::Eraser, delta));
        s.x.push_back(phi);
        s.y.push_back(rate_hat(t.n01, t.n_pairs));
      }
      return fit_fringe(s).visibility;
    };
    const double v1 = mc_visibility(1.0), v10 = mc_visibility(10.0);
    v.detail << " max change=" << worst << " V(delta=1)=" << v1 << " V(delta=10)=" << v10;
    v.require(worst < 1e-12, "invariant to 1e-12");
    v.require(std::abs(v1 - v10) < 0.02, "visibility change < 0.02");
  });

  criterion(7, "joint-phase law", [](Verdict& v) {
    RunConfig c = scan_config(MeasurementMode::Eraser, Engine::Both, 16);
    c.scan = ScanAxis::Joint;
    c.fixed_phi = 0.9;
    c.fixed_psi = -0.4;
    const auto rows = compute_scan(c).rows;
    const double expected = 0.5 * (1.0 - std::sin(0.5));
    double analytic = 0.0, worst_sigmas = 0.0;
    for (const ScanRow& r : rows) {
      analytic = std::max(analytic, std::abs(*r.r01 - expected));
      const double p = expected / 2.0, n = double(*r.n_pairs);
      worst_sigmas = std::max(worst_sigmas, std::abs(double(*r.n01) / n - p) / std::sqrt(p * (1 - p) / n));
    }
    v.detail << " analytic dev=" << analytic << " MC worst=" << worst_sigmas << " sigma";
    v.require(analytic < 1e-12, "analytic constant to 1e-12");
    v.require(worst_sigmas <= 5.0, "Monte-Carlo within 5 sigma");
  });

  criterion(8, "oracle equivalence", [](Verdict& v) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      SetupConfig c = setup(ph(rng), ph(rng));
      c.tau = 0.8;
      for (Observable o : kAllObservables) {
        worst = std::max(worst, std::abs(brute_force_expectation(o, c, 64) - analytic_value(o, c.phi, c.psi)));
      }
    }
    int out01 = 0, out02 = 0, out10 = 0;
    for (int k = 0; k < 12; ++k) {
      const double phi = kTwoPi * k / 12.0, psi = 0.35;
      const EnsembleSpec spec{kPairs, random::derive_seed(88, k), 1.0};
      const EventTally t = monte_carlo_run(spec, setup(phi, psi));
      const double n = double(t.n_pairs);
      const double p01 = analytic_value(Observable::R01, phi, psi) / 2.0;
      const double p02 = analytic_value(Observable::R02, phi, psi) / 2.0;
      if (std::abs(double(t.n01) / n - p01) > 5.0 * std::sqrt(p01 * (1 - p01) / n)) ++out01;
      if (std::abs(double(t.n02) / n - p02) > 5.0 * std::sqrt(p02 * (1 - p02) / n)) ++out02;
      const double i10 = mean_local_intensities(spec, setup(phi, psi)).i10;
      if (std::abs(i10 - 1.0) > 5.0 * (1.0 / std::numbers::sqrt2) / std::sqrt(n)) ++out10;
    }
    v.detail << " max|brute-analytic|=" << worst << " MC outliers r01/r02/i10=" << out01 << "/" << out02 << "/" << out10;
    v.require(worst < 1e-9, "brute force within 1e-9");
    v.require(out01 <= 1 && out02 <= 1 && out10 <= 1, "<= 1 outlier of 12");
  });

  criterion(9, "determinism", [&](Verdict& v) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eraser_acceptance";
    fs::create_directories(dir);
    RunConfig c = scan_config(MeasurementMode::Eraser, Engine::Both, 16);
    c.pairs = 20000;
    c.seed = 2024;
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "3", "8"}) {
      ::setenv("ERASER_SIM_THREADS", threads, 1);
      c.out_path = (dir / (std::string("lib_") + threads + ".csv")).string();
      (void)run_scan(c);
      outputs.push_back(slurp(c.out_path));
    }
    ::unsetenv("ERASER_SIM_THREADS");
    bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].empty();
    v.detail << " library runs identical=" << (same ? "yes" : "no");

    if (!cli_path.empty()) {
      std::vector<std::string> cli_out;
      for (const char* threads : {"1", "1", "6"}) {
        const fs::path out = dir / ("cli_" + std::to_string(cli_out.size()) + ".csv");
        const std::string cmd = std::string("ERASER_SIM_THREADS=") + threads + " \"" + cli_path +
                                "\" --points 16 --pairs 20000 --seed 7 --out \"" + out.string() + "\"";
        const int rc = std::system(cmd.c_str());
        v.require(rc == 0, "CLI exit status 0");
        cli_out.push_back(slurp(out));
      }
      const bool cli_same = cli_out[0] == cli_out[1] && cli_out[0] == cli_out[2] && !cli_out[0].empty();
      v.detail << " CLI runs identical=" << (cli_same ? "yes" : "no");
      same = same && cli_same;
    }
    fs::remove_all(dir);
    v.require(same, "byte-identical CSV");
  });

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
