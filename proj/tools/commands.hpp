#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ghostfringe/ghostfringe.hpp"

namespace ghostfringe::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kSelfTestFailure = 3, kValidationFailure = 4 };

/// Everything a run depends on. Positions, bandwidths and the scan range are
/// in normalized units (X = x k0 b / 2πf, W = w b / 2π); b sets the length unit.
struct RunConfig {
  std::string source = "thermal";
  double b = 1.0;
  double d_over_b = 4.0;
  std::vector<double> W;               // empty -> command default
  double w_physical = 0.0;          // overrides W when > 0
  double gain_r = 0.5;
  double gain_sigma = 0.0;          // physical; 0 -> 4π/b, inf -> flat gain
  std::string scan;                 // empty -> diagonal for entangled, else symmetric
  double xmax = 0.5;
  std::size_t points = 401;
  std::size_t grid_n = 0;           // 0 -> default grid
  double grid_qmax = 0.0;           // 0 -> default grid
  std::uint64_t seed = 1;
  std::size_t realizations = 0;     // 0 -> command default
  std::string out = "fringe.csv";
  double k0 = 1.0;
  double focal = 1.0;
  double window = 0.0;              // 0 -> command default
  unsigned threads = 0;             // 0 -> hardware concurrency
};

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::vector<double> fig1_default_bandwidths() { return {0.01, 0.1, 0.3, 0.6, 1.0, 2.0}; }

/// Config echo as key=value lines; readable back through --config.
inline std::vector<std::string> echo(const RunConfig& c, const std::string& command, const QGrid* grid) {
  std::vector<std::string> lines;
  lines.push_back("command=" + command);
  lines.push_back("source=" + c.source);
  lines.push_back("b=" + format_double(c.b));
  lines.push_back("d-over-b=" + format_double(c.d_over_b));
  std::string ws;
  for (std::size_t i = 0; i < c.W.size(); ++i) ws += (i ? "," : "") + format_double(c.W[i]);
  lines.push_back("W=[" + ws + "]");
  lines.push_back("w-physical=" + format_double(c.w_physical));
  lines.push_back("gain-r=" + format_double(c.gain_r));
  lines.push_back("gain-sigma=" + format_double(c.gain_sigma));
  lines.push_back("scan=" + c.scan);
  lines.push_back("xmax=" + format_double(c.xmax));
  lines.push_back("points=" + std::to_string(c.points));
  lines.push_back("grid-n=" + std::to_string(grid ? grid->size() : c.grid_n));
  lines.push_back("grid-qmax=" + format_double(grid ? grid->q_max() : c.grid_qmax));
  lines.push_back("seed=" + std::to_string(c.seed));
  lines.push_back("realizations=" + std::to_string(c.realizations));
  lines.push_back("k0=" + format_double(c.k0));
  lines.push_back("focal=" + format_double(c.focal));
  lines.push_back("window=" + format_double(c.window));
  return lines;
}

/// The entangled fringe depends on x1 + x2 only, so it lives on the diagonal
/// scan; every other source defaults to the symmetric scan.
inline void default_scan(RunConfig& c) {
  if (c.scan.empty()) c.scan = c.source == "entangled" ? "diagonal" : "symmetric";
}

inline void validate(const RunConfig& c) {
  static const std::vector<std::string> sources{"thermal", "entangled", "spdc-type1", "spdc-type2", "spdc-single"};
  if (std::find(sources.begin(), sources.end(), c.source) == sources.end())
    throw ConfigError("unknown source '" + c.source + "'");
  if (!(c.d_over_b > 1.0)) throw ConfigError("d-over-b must exceed 1");
  if (c.scan != "symmetric" && c.scan != "diagonal" && c.scan != "grid") throw ConfigError("unknown scan kind '" + c.scan + "'");
  if (c.points < 2) throw ConfigError("points must be >= 2");
  if (c.W.empty()) throw ConfigError("at least one W is required");
  for (double w : c.W)
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("W must be finite and nonnegative");
  if (c.w_physical < 0.0) throw ConfigError("w-physical must be nonnegative");
  if (c.grid_n != 0 && (c.grid_n < 3 || c.grid_n % 2 == 0)) throw ConfigError("grid-n must be odd and >= 3");
  if (c.grid_qmax < 0.0) throw ConfigError("grid-qmax must be nonnegative");
  if (c.xmax <= 0.0) throw ConfigError("xmax must be positive");
}

struct Setup {
  SlitGeometry geom;
  OpticalBench bench;
  DetectionScan scan;
};

inline ScanKind scan_kind(const std::string& s) {
  if (s == "diagonal") return ScanKind::Diagonal;
  if (s == "grid") return ScanKind::Grid;
  return ScanKind::Symmetric;
}

inline Setup make_setup(const RunConfig& c) {
  SlitGeometry geom(c.b, c.b * c.d_over_b);
  OpticalBench bench(c.k0, c.focal);
  return {geom, bench, DetectionScan::normalized(scan_kind(c.scan), c.xmax, c.points, geom, bench)};
}

/// Thermal spectrum for one normalized bandwidth; W = 0 selects the delta limit.
inline SpatialSpectrum thermal_spectrum(const RunConfig& c, double W, const SlitGeometry& geom) {
  if (c.w_physical > 0.0) return SpatialSpectrum::gaussian(c.w_physical);
  if (W == 0.0) return SpatialSpectrum::delta();
  return SpatialSpectrum::gaussian(physical_bandwidth(W, geom));
}

inline GainProfile gain_profile(const RunConfig& c) {
  const double sigma = c.gain_sigma > 0.0 ? c.gain_sigma : 4.0 * std::numbers::pi / c.b;
  return GainProfile::gaussian(c.gain_r, sigma);
}

inline Crystal crystal_for(const std::string& source) {
  if (source == "spdc-type2") return Crystal::TypeII;
  if (source == "spdc-single") return Crystal::SingleBeam;
  return Crystal::TypeI;
}

/// Default grid for the configured source, overridden by grid-n / grid-qmax.
inline QGrid grid_for(const RunConfig& c, const SlitGeometry& geom, const SpatialSpectrum* spectrum) {
  QGrid base = spectrum ? default_qgrid(*spectrum, geom)
               : (c.source.rfind("spdc", 0) == 0 ? default_qgrid(gain_profile(c), geom) : default_qgrid(geom));
  const double q_max = c.grid_qmax > 0.0 ? c.grid_qmax : base.q_max();
  const std::size_t n = c.grid_n > 0 ? c.grid_n : base.size();
  return QGrid(q_max, n);
}

/// Analytic fringe for the configured source on the given engine.
inline FringePattern compute_fringe(const RunConfig& c, const FringeEngine& engine, const DetectionScan& scan, double W) {
  if (c.source == "thermal") return engine.thermal(thermal_spectrum(c, W, engine.geometry()), scan);
  if (c.source == "entangled") return engine.pattern(entangled_kernel(), scan);
  return engine.spdc(gain_profile(c), crystal_for(c.source), scan);
}

inline void write_header(std::ostream& os, const std::vector<std::string>& echo_lines, const std::string& note) {
  for (const auto& l : echo_lines) os << "# " << l << '\n';
  os << "# normalization=" << note << '\n';
}

inline void write_pattern_rows(std::ostream& os, const FringePattern& p, const std::string& prefix = "") {
  const double peak = p.max_value();
  const std::size_t n = p.positions.size();
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    os << prefix;
    if (p.kind == ScanKind::Grid) os << format_double(p.positions[i / n]) << ',' << format_double(p.positions[i % n]);
    else os << format_double(p.positions[i]);
    os << ',' << format_double(p.values[i]) << ',' << format_double(peak > 0.0 ? p.values[i] / peak : 0.0) << '\n';
  }
}

inline std::string position_columns(ScanKind k) { return k == ScanKind::Grid ? "X1,X2" : "X"; }

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file '" + path + "'");
  return os;
}

inline std::optional<VisibilityReport> try_visibility(const FringePattern& p, double window, std::string& why) {
  try {
    return visibility(p, -window, window);
  } catch (const ConfigError& e) {
    why = e.what();
    return std::nullopt;
  }
}

inline std::string summary_line(const VisibilityReport& v) {
  std::ostringstream os;
  os << "michelson=" << format_double(v.michelson) << " depth=" << format_double(v.depth)
     << " peak_spacing=" << format_double(v.peak_spacing)
     << " central_peak_spacing=" << format_double(v.central_peak_spacing)
     << " dominant_period=" << format_double(v.dominant_period);
  return os.str();
}

inline void default_bandwidth(RunConfig& c) {
  if (c.W.empty()) c.W = {2.0};
  default_scan(c);
}

inline int cmd_fringe(RunConfig c, std::ostream& out) {
  default_bandwidth(c);
  validate(c);
  const Setup s = make_setup(c);
  std::optional<SpatialSpectrum> spectrum;
  if (c.source == "thermal") spectrum = thermal_spectrum(c, c.W.front(), s.geom);
  const QGrid grid = grid_for(c, s.geom, spectrum ? &*spectrum : nullptr);
  const FringeEngine engine(s.geom, s.bench, grid, c.threads);
  const FringePattern p = compute_fringe(c, engine, s.scan, c.W.front());

  auto os = open_output(c.out);
  write_header(os, echo(c, "fringe", &grid), p.normalization);
  os << position_columns(p.kind) << ",G2,G2_norm\n";
  write_pattern_rows(os, p);

  out << "source=" << c.source << " points=" << p.values.size() << " out=" << c.out << '\n';
  if (p.kind != ScanKind::Grid) {
    std::string why;
    auto v = try_visibility(p, c.window > 0.0 ? c.window : 0.15, why);
    // narrowband fringes have twice the period; widen the automatic window
    if (!v && c.window == 0.0) v = try_visibility(p, 0.3, why);
    if (v) out << summary_line(*v) << '\n';
    else out << "visibility unavailable: " << why << '\n';
  }
  return kSuccess;
}

inline std::string fig1_curve_path(const std::string& out, double W) {
  const std::filesystem::path p(out);
  const std::string name = p.stem().string() + "_W" + format_double(W) + p.extension().string();
  return (p.parent_path() / name).string();
}

inline int cmd_fig1(RunConfig c, std::ostream& out) {
  if (c.W.empty()) c.W = fig1_default_bandwidths();
  c.source = "thermal";
  c.scan = "symmetric";
  validate(c);
  const Setup s = make_setup(c);
  const double window = c.window > 0.0 ? c.window : 0.3;

  auto combined = open_output(c.out);
  write_header(combined, echo(c, "fig1", nullptr), "each curve normalized by its own maximum");
  combined << "W,X,G2,G2_norm\n";

  double previous_ratio = -1.0;
  bool monotone = true;
  for (double W : c.W) {
    const SpatialSpectrum spectrum = thermal_spectrum(c, W, s.geom);
    const QGrid grid = grid_for(c, s.geom, &spectrum);
    const FringeEngine engine(s.geom, s.bench, grid, c.threads);
    const FringePattern p = engine.thermal(spectrum, s.scan);

    RunConfig curve = c;
    curve.W = {W};
    auto os = open_output(fig1_curve_path(c.out, W));
    write_header(os, echo(curve, "fig1", &grid), "normalized by this curve's maximum");
    os << "X,G2,G2_norm\n";
    write_pattern_rows(os, p);
    write_pattern_rows(combined, p, format_double(W) + ",");

    const double ratio = doubled_frequency_ratio(p, s.geom);
    if (ratio < previous_ratio) monotone = false;
    previous_ratio = ratio;
    out << "W=" << format_double(W) << " doubled_frequency_ratio=" << format_double(ratio);
    std::string why;
    if (auto v = try_visibility(p, window, why)) out << ' ' << summary_line(*v) << '\n';
    else out << " visibility unavailable: " << why << '\n';
  }
  out << "doubled_frequency_ratio_nondecreasing=" << (monotone ? "yes" : "no") << '\n';
  return kSuccess;
}

inline constexpr double kMcThreshold = 0.05;

inline int cmd_mc_validate(RunConfig c, std::ostream& out) {
  if (c.realizations == 0) c.realizations = 20000;
  default_bandwidth(c);
  validate(c);
  if (c.source != "thermal") throw ConfigError("mc-validate needs source=thermal");
  const Setup s = make_setup(c);
  const SpatialSpectrum spectrum = thermal_spectrum(c, c.W.front(), s.geom);
  if (!spectrum.is_gaussian()) throw ConfigError("mc-validate needs a Gaussian spectrum (W > 0)");
  if (c.realizations < 100) throw ConfigError("mc-validate needs at least 100 realizations");

  const QGrid grid = grid_for(c, s.geom, &spectrum);
  const FringeEngine engine(s.geom, s.bench, grid, c.threads);
  const FringePattern quad = engine.thermal(spectrum, s.scan);
  const QGrid modes = mc_grid(spectrum, s.geom);
  const EnsembleEstimate mc = estimate_joint_intensity(spectrum, s.scan, c.realizations, c.seed, modes, c.threads);

  double quad_max = quad.max_value(), mc_max = 0.0;
  for (double v : mc.mean) mc_max = std::max(mc_max, v);
  double deviation = 0.0;
  for (std::size_t i = 0; i < quad.values.size(); ++i)
    deviation = std::max(deviation, std::abs(mc.mean[i] / mc_max - quad.values[i] / quad_max));
  const bool pass = deviation < kMcThreshold;

  auto os = open_output(c.out);
  auto lines = echo(c, "mc-validate", &grid);
  lines.push_back("mc-grid-n=" + std::to_string(modes.size()));
  lines.push_back("mc-grid-qmax=" + format_double(modes.q_max()));
  write_header(os, lines, "G2 quadrature unnormalized; G2_mc in the same units; G2_norm = G2 / max(G2)");
  os << position_columns(quad.kind) << ",G2,G2_norm,G2_mc,G2_stderr\n";
  const std::size_t n = quad.positions.size();
  for (std::size_t i = 0; i < quad.values.size(); ++i) {
    if (quad.kind == ScanKind::Grid) os << format_double(quad.positions[i / n]) << ',' << format_double(quad.positions[i % n]);
    else os << format_double(quad.positions[i]);
    os << ',' << format_double(quad.values[i]) << ',' << format_double(quad.values[i] / quad_max) << ','
       << format_double(mc.mean[i]) << ',' << format_double(mc.standard_error[i]) << '\n';
  }

  out << "realizations=" << c.realizations << " seed=" << c.seed << " max_normalized_deviation="
      << format_double(deviation) << " threshold=" << format_double(kMcThreshold) << ' ' << (pass ? "PASS" : "FAIL")
      << '\n';
  return pass ? kSuccess : kValidationFailure;
}

inline constexpr double kMomentZLimit = 4.0;

inline int cmd_moments(RunConfig c, std::ostream& out) {
  if (c.realizations == 0) c.realizations = 100000;
  default_bandwidth(c);
  validate(c);
  const Setup s = make_setup(c);
  const SpatialSpectrum spectrum = thermal_spectrum(c, c.W.front(), s.geom);
  const QGrid modes = mc_grid(spectrum, s.geom);
  const auto tuples = default_moment_battery(modes, spectrum);
  const MomentCheckReport report = moment_check(spectrum, modes, tuples, c.realizations, c.seed, c.threads);

  out << "# realizations=" << c.realizations << " seed=" << c.seed << " modes=" << modes.size()
      << " dq=" << format_double(modes.spacing()) << '\n';
  out << "q1,q2,q1',q2',sampled_re,sampled_im,predicted,stderr,z\n";
  for (const auto& r : report.rows) {
    out << format_double(modes[r.tuple.j1]) << ',' << format_double(modes[r.tuple.j2]) << ','
        << format_double(modes[r.tuple.k1]) << ',' << format_double(modes[r.tuple.k2]) << ','
        << format_double(r.sampled.real()) << ',' << format_double(r.sampled.imag()) << ','
        << format_double(r.predicted) << ',' << format_double(r.standard_error) << ',' << format_double(r.z) << '\n';
  }
  const std::size_t exceed = report.exceedances(kMomentZLimit);
  out << "exceedances(|z|>4)=" << exceed << " of " << report.rows.size() << ' ' << (exceed <= 1 ? "PASS" : "FAIL")
      << '\n';
  return exceed <= 1 ? kSuccess : kValidationFailure;
}

/// Runs a command, mapping library exceptions onto exit codes.
template <typename Command>
int run_guarded(Command&& command, const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    return command(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical self-test failure: " << e.what() << '\n';
    return kSelfTestFailure;
  }
}

}  // namespace ghostfringe::cli
