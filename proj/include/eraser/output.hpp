#pragma once

// CSV / JSON / SVG writers and the run_scan entry point used by the CLI.
// Floating-point text uses the shortest round-trip representation, so output
// is byte-deterministic and re-parses to the identical doubles.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eraser/scan.hpp"

namespace eraser {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCsvHeader =
    "index,phase_rad,phi,psi,i10,i21,i22,r01,r02,r03,r04,n01,n02,n03,n04,n_lost,n_pairs";

/// Exit status when --strict is set and a summary test failed.
inline constexpr int kStrictFailureStatus = 3;

[[nodiscard]] inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

namespace detail {

inline void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << format_double(*v);
}
inline void put(std::ostream& os, const std::optional<std::uint64_t>& v) {
  if (v) os << *v;
}

inline nlohmann::json to_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }
inline nlohmann::json to_json(const std::optional<std::uint64_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

[[nodiscard]] inline nlohmann::json summary_json(const ScanSummary& s) {
  nlohmann::json j;
  nlohmann::json fits = nlohmann::json::object();
  for (const NamedFit& nf : s.fits) {
    if (nf.fit) {
      const FringeFit& f = *nf.fit;
      fits[nf.column] = {{"c", f.c},
                         {"a", f.a},
                         {"b", f.b},
                         {"visibility", std::isfinite(f.visibility) ? nlohmann::json(f.visibility) : nlohmann::json()},
                         {"raw_visibility", f.raw_visibility},
                         {"phase", f.phase},
                         {"residual_rms", f.residual_rms}};
    } else {
      fits[nf.column] = {{"error", nf.error}};
    }
  }
  j["fits"] = std::move(fits);
  nlohmann::json tests = nlohmann::json::object();
  for (const NamedTest& t : s.tests) {
    tests[t.name] = {{"pass", t.pass}, {"measured", t.measured}, {"threshold", t.threshold}};
  }
  j["tests"] = std::move(tests);
  j["loss_fraction"] = to_json(s.loss_fraction);
  if (s.coherence) {
    j["coherence"] = {{"tau_0", s.coherence->tau_0}, {"tau_j_min", s.coherence->tau_j_min}};
  } else {
    j["coherence"] = nullptr;
  }
  j["all_passed"] = s.all_passed;
  return j;
}

[[nodiscard]] inline nlohmann::json config_json(const RunConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"scan", to_string(c.scan)},
          {"scan_start", c.scan_start},
          {"scan_end", c.scan_end},
          {"scan_points", c.scan_points},
          {"fixed_phi", c.fixed_phi},
          {"fixed_psi", c.fixed_psi},
          {"delta", c.delta},
          {"tau", c.tau},
          {"pairs", c.pairs},
          {"seed", c.seed},
          {"engine", to_string(c.engine)},
          {"gamma_ratio", c.gamma_ratio}};
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ScanResult& res) {
  os << kCsvHeader << '\n';
  for (const ScanRow& r : res.rows) {
    os << r.index << ',' << format_double(r.phase_rad) << ',' << format_double(r.phi) << ','
       << format_double(r.psi);
    for (const auto* v : {&r.i10, &r.i21, &r.i22, &r.r01, &r.r02, &r.r03, &r.r04}) {
      os << ',';
      detail::put(os, *v);
    }
    for (const auto* v : {&r.n01, &r.n02, &r.n03, &r.n04, &r.n_lost, &r.n_pairs}) {
      os << ',';
      detail::put(os, *v);
    }
    os << '\n';
  }

  // Summary block: '#'-prefixed key,value lines after the data rows.
  const ScanSummary& s = res.summary;
  os << "# summary\n";
  for (const NamedFit& nf : s.fits) {
    if (!nf.fit) {
      os << "# fit." << nf.column << ".error," << nf.error << '\n';
      continue;
    }
    const FringeFit& f = *nf.fit;
    os << "# fit." << nf.column << ".c," << format_double(f.c) << '\n';
    os << "# fit." << nf.column << ".a," << format_double(f.a) << '\n';
    os << "# fit." << nf.column << ".b," << format_double(f.b) << '\n';
    os << "# fit." << nf.column << ".visibility," << format_double(f.visibility) << '\n';
    os << "# fit." << nf.column << ".raw_visibility," << format_double(f.raw_visibility) << '\n';
    os << "# fit." << nf.column << ".phase," << format_double(f.phase) << '\n';
    os << "# fit." << nf.column << ".residual_rms," << format_double(f.residual_rms) << '\n';
  }
  for (const NamedTest& t : s.tests) {
    os << "# test." << t.name << ',' << (t.pass ? "pass" : "fail") << ',' << format_double(t.measured) << ','
       << format_double(t.threshold) << '\n';
  }
  if (s.loss_fraction) os << "# loss_fraction," << format_double(*s.loss_fraction) << '\n';
  if (s.coherence) {
    os << "# coherence.tau_0," << format_double(s.coherence->tau_0) << '\n';
    os << "# coherence.tau_j_min," << format_double(s.coherence->tau_j_min) << '\n';
  }
  os << "# all_passed," << (s.all_passed ? "true" : "false") << '\n';
}

inline void write_json(std::ostream& os, const ScanResult& res) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& r : res.rows) {
    rows.push_back({{"index", r.index},
                    {"phase_rad", r.phase_rad},
                    {"phi", r.phi},
                    {"psi", r.psi},
                    {"i10", detail::to_json(r.i10)},
                    {"i21", detail::to_json(r.i21)},
                    {"i22", detail::to_json(r.i22)},
                    {"r01", detail::to_json(r.r01)},
                    {"r02", detail::to_json(r.r02)},
                    {"r03", detail::to_json(r.r03)},
                    {"r04", detail::to_json(r.r04)},
                    {"n01", detail::to_json(r.n01)},
                    {"n02", detail::to_json(r.n02)},
                    {"n03", detail::to_json(r.n03)},
                    {"n04", detail::to_json(r.n04)},
                    {"n_lost", detail::to_json(r.n_lost)},
                    {"n_pairs", detail::to_json(r.n_pairs)}});
  }
  nlohmann::json doc;
  doc["config"] = detail::config_json(res.config);
  doc["rows"] = std::move(rows);
  doc["summary"] = detail::summary_json(res.summary);
  os << doc.dump(2) << '\n';
}

/// Self-contained SVG: one polyline per observable column, phase on x.
inline void write_svg(std::ostream& os, const ScanResult& res) {
  constexpr double kW = 800, kH = 500, kLeft = 70, kRight = 150, kTop = 30, kBottom = 60;
  constexpr std::array<const char*, 7> kColors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                  "#9467bd", "#8c564b", "#e377c2"};
  struct Series {
    const char* name;
    std::optional<double> ScanRow::*member;
  };
  constexpr std::array<Series, 7> kSeries = {{{"i10", &ScanRow::i10},
                                               {"i21", &ScanRow::i21},
                                               {"i22", &ScanRow::i22},
                                               {"r01", &ScanRow::r01},
                                               {"r02", &ScanRow::r02},
                                               {"r03", &ScanRow::r03},
                                               {"r04", &ScanRow::r04}}};

  const RunConfig& cfg = res.config;
  const double x0 = cfg.scan_start, x1 = cfg.scan_end;
  double y0 = 0.0, y1 = 1.0;
  for (const ScanRow& r : res.rows)
    for (const Series& s : kSeries)
      if (const auto& v = r.*s.member) y1 = std::max(y1, *v);
  y1 = std::ceil(y1 * 4.0) / 4.0;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  auto num = [](double v) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(3);
    ss << v;
    return ss.str();
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
     << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">" << num(xv)
       << "</text>\n";
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kH - 15) << "\" text-anchor=\"middle\">"
     << to_string(cfg.scan) << " scan phase (rad)</text>\n";
  os << "<text transform=\"translate(18," << num(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">intensity (I0) / coincidence rate (I0^2)</text>\n";

  int legend = 0;
  for (std::size_t s = 0; s < kSeries.size(); ++s) {
    std::ostringstream pts;
    bool any = false;
    for (const ScanRow& r : res.rows) {
      if (const auto& v = r.*kSeries[s].member) {
        pts << (any ? " " : "") << num(sx(r.phase_rad)) << ',' << num(sy(*v));
        any = true;
      }
    }
    if (!any) continue;
    os << "<polyline fill=\"none\" stroke=\"" << kColors[s] << "\" stroke-width=\"1.5\" points=\"" << pts.str()
       << "\"/>\n";
    const double ly = kTop + 10 + 18 * legend++;
    os << "<line x1=\"" << num(kW - kRight + 15) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kW - kRight + 40)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << kColors[s] << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(kW - kRight + 46) << "\" y=\"" << num(ly + 4) << "\">" << kSeries[s].name
       << "</text>\n";
  }
  os << "</svg>\n";
}

namespace detail {
template <typename Writer>
void write_file(const std::string& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  w(out);
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}
}  // namespace detail

/// Runs the scan and writes the data file (and plot, if requested).
/// Returns the process exit status: 0, or kStrictFailureStatus when --strict
/// is set and a summary test failed. Throws IoError on unwritable paths.
inline int run_scan(const RunConfig& cfg, unsigned workers = parallel::worker_count()) {
  const ScanResult res = compute_scan(cfg, workers);
  detail::write_file(cfg.out_path, [&](std::ostream& os) {
    if (cfg.format == OutputFormat::Csv) write_csv(os, res);
    else write_json(os, res);
  });
  if (cfg.plot_path) detail::write_file(*cfg.plot_path, [&](std::ostream& os) { write_svg(os, res); });
  return (cfg.strict && !res.summary.all_passed) ? kStrictFailureStatus : 0;
}

}  // namespace eraser
