#pragma once

// Command-line / JSON run configuration. Precedence: built-in defaults, then
// the config file (--config), then explicit flags.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eraser/core.hpp"

namespace eraser {

enum class ScanAxis { Phi, Psi, Joint };
enum class Engine { Analytic, MonteCarlo, Both };
enum class OutputFormat { Csv, Json };

/// Bad command line or config file. Carries the text to show the user.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// --help was requested; what() holds the help text.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  MeasurementMode mode = MeasurementMode::Eraser;
  ScanAxis scan = ScanAxis::Phi;
  double scan_start = 0.0;
  double scan_end = kTwoPi;
  std::uint64_t scan_points = 64;
  double fixed_phi = 0.0;
  double fixed_psi = 0.0;
  double delta = 1.0;
  double tau = 1.0;
  std::uint64_t pairs = 100000;
  std::uint64_t seed = 42;
  Engine engine = Engine::Both;
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> plot_path;
  bool strict = false;
  double gamma_ratio = 0.1;  // per-photon linewidth / delta, for the coherence report

  [[nodiscard]] bool uses_analytic() const noexcept { return engine != Engine::MonteCarlo; }
  [[nodiscard]] bool uses_montecarlo() const noexcept { return engine != Engine::Analytic; }
};

[[nodiscard]] inline std::string_view to_string(ScanAxis a) noexcept {
  switch (a) {
    case ScanAxis::Phi: return "phi";
    case ScanAxis::Psi: return "psi";
    case ScanAxis::Joint: return "joint";
  }
  return "?";
}

[[nodiscard]] inline std::string_view to_string(Engine e) noexcept {
  switch (e) {
    case Engine::Analytic: return "analytic";
    case Engine::MonteCarlo: return "montecarlo";
    case Engine::Both: return "both";
  }
  return "?";
}

[[nodiscard]] inline std::string_view to_string(OutputFormat f) noexcept {
  return f == OutputFormat::Csv ? "csv" : "json";
}

namespace detail {

[[nodiscard]] inline ScanAxis parse_scan_axis(std::string_view s) {
  if (s == "phi") return ScanAxis::Phi;
  if (s == "psi") return ScanAxis::Psi;
  if (s == "joint") return ScanAxis::Joint;
  throw UsageError("unknown scan axis: " + std::string(s) + " (expected phi, psi or joint)");
}

[[nodiscard]] inline Engine parse_engine(std::string_view s) {
  if (s == "analytic") return Engine::Analytic;
  if (s == "montecarlo") return Engine::MonteCarlo;
  if (s == "both") return Engine::Both;
  throw UsageError("unknown engine: " + std::string(s) + " (expected analytic, montecarlo or both)");
}

[[nodiscard]] inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw UsageError("unknown format: " + std::string(s) + " (expected csv or json)");
}

[[nodiscard]] inline MeasurementMode parse_mode_arg(std::string_view s) {
  try {
    return parse_mode(s);
  } catch (const InputError&) {
    throw UsageError("unknown mode: " + std::string(s) + " (expected eraser, whichway-a or whichway-b)");
  }
}

// Returns true when the file set the output format explicitly.
inline bool apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config file: top level must be a JSON object");
  bool format_set = false;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "mode") cfg.mode = parse_mode_arg(v.get<std::string>());
      else if (key == "scan") cfg.scan = parse_scan_axis(v.get<std::string>());
      else if (key == "scan_start") cfg.scan_start = v.get<double>();
      else if (key == "scan_end") cfg.scan_end = v.get<double>();
      else if (key == "scan_points") cfg.scan_points = v.get<std::uint64_t>();
      else if (key == "fixed_phi") cfg.fixed_phi = v.get<double>();
      else if (key == "fixed_psi") cfg.fixed_psi = v.get<double>();
      else if (key == "delta") cfg.delta = v.get<double>();
      else if (key == "tau") cfg.tau = v.get<double>();
      else if (key == "pairs") cfg.pairs = v.get<std::uint64_t>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "engine") cfg.engine = parse_engine(v.get<std::string>());
      else if (key == "out_path") cfg.out_path = v.get<std::string>();
      else if (key == "format") {
        cfg.format = parse_format(v.get<std::string>());
        format_set = true;
      }
      else if (key == "plot_path") cfg.plot_path = v.is_null() ? std::nullopt : std::optional(v.get<std::string>());
      else if (key == "strict") cfg.strict = v.get<bool>();
      else if (key == "gamma_ratio") cfg.gamma_ratio = v.get<double>();
      else throw UsageError("config file: unknown field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  return format_set;
}

[[nodiscard]] inline bool ends_with(std::string_view s, std::string_view suffix) noexcept {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace detail

/// Throws UsageError when a field combination is invalid.
inline void validate(const RunConfig& cfg) {
  if (cfg.out_path.empty()) throw UsageError("missing output path (--out)");
  if (cfg.scan_points < 2) throw UsageError("--points must be >= 2");
  if (cfg.pairs < 1) throw UsageError("--pairs must be >= 1");
  if (!std::isfinite(cfg.scan_start) || !std::isfinite(cfg.scan_end)) throw UsageError("scan range must be finite");
  if (!(cfg.scan_end > cfg.scan_start)) throw UsageError("--scan-end must be greater than --scan-start");
  if (!std::isfinite(cfg.fixed_phi) || !std::isfinite(cfg.fixed_psi)) throw UsageError("--phi/--psi must be finite");
  if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta)) throw UsageError("--delta must be finite and >= 0");
  if (!std::isfinite(cfg.tau)) throw UsageError("--tau must be finite");
  if (!(cfg.gamma_ratio > 0.0 && cfg.gamma_ratio <= 1.0)) throw UsageError("--gamma-ratio must lie in (0, 1]");
}

/// Parses `args` (args[0] is the program name).
[[nodiscard]] inline RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Delayed-choice quantum eraser coherence-model simulator", "eraser_sim"};
  app.allow_config_extras(false);

  std::optional<std::string> config_path, mode, scan, engine, out, format, plot;
  std::optional<double> scan_start, scan_end, phi, psi, delta, tau, gamma_ratio;
  std::optional<std::uint64_t> points, pairs, seed;
  bool strict = false;

  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--mode", mode, "eraser | whichway-a | whichway-b (default eraser)");
  app.add_option("--scan", scan, "phi | psi | joint (default phi)");
  app.add_option("--scan-start", scan_start, "scan start, radians (default 0)");
  app.add_option("--scan-end", scan_end, "scan end, radians, exclusive (default 2pi)");
  app.add_option("--points", points, "number of scan points (default 64)");
  app.add_option("--phi", phi, "fixed D0 phase phi, radians (default 0)");
  app.add_option("--psi", psi, "fixed beam-splitter phase psi, radians (default 0)");
  app.add_option("--delta", delta, "detuning FWHM (default 1)");
  app.add_option("--tau", tau, "delay t_s - t_id (default 1)");
  app.add_option("--pairs", pairs, "Monte-Carlo pairs per scan point (default 100000)");
  app.add_option("--seed", seed, "64-bit master seed (default 42)");
  app.add_option("--engine", engine, "analytic | montecarlo | both (default both)");
  app.add_option("--out", out, "output data file");
  app.add_option("--format", format, "csv | json (default from --out extension, else csv)");
  app.add_option("--plot", plot, "optional SVG plot path");
  app.add_option("--gamma-ratio", gamma_ratio, "per-photon linewidth / delta for the coherence report (default 0.1)");
  app.add_flag("--strict", strict, "exit nonzero when a summary test fails");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  bool format_given = false;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw UsageError("cannot open config file: " + *config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file " + *config_path + ": " + e.what());
    }
    format_given = detail::apply_json(cfg, j);
  }

  if (mode) cfg.mode = detail::parse_mode_arg(*mode);
  if (scan) cfg.scan = detail::parse_scan_axis(*scan);
  if (scan_start) cfg.scan_start = *scan_start;
  if (scan_end) cfg.scan_end = *scan_end;
  if (points) cfg.scan_points = *points;
  if (phi) cfg.fixed_phi = *phi;
  if (psi) cfg.fixed_psi = *psi;
  if (delta) cfg.delta = *delta;
  if (tau) cfg.tau = *tau;
  if (pairs) cfg.pairs = *pairs;
  if (seed) cfg.seed = *seed;
  if (engine) cfg.engine = detail::parse_engine(*engine);
  if (out) cfg.out_path = *out;
  if (format) {
    cfg.format = detail::parse_format(*format);
    format_given = true;
  }
  if (plot) cfg.plot_path = *plot;
  if (gamma_ratio) cfg.gamma_ratio = *gamma_ratio;
  if (strict) cfg.strict = true;
  if (!format_given && detail::ends_with(cfg.out_path, ".json")) cfg.format = OutputFormat::Json;

  validate(cfg);
  return cfg;
}

[[nodiscard]] inline RunConfig parse_config(int argc, const char* const* argv) {
  return parse_config(std::vector<std::string>(argv, argv + argc));
}

}  // namespace eraser
