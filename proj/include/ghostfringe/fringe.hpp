#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghostfringe/error.hpp"
#include "ghostfringe/kernel.hpp"
#include "ghostfringe/optics.hpp"
#include "ghostfringe/parallel.hpp"
#include "ghostfringe/qgrid.hpp"
#include "ghostfringe/quadrature.hpp"
#include "ghostfringe/spectrum.hpp"

namespace ghostfringe {

/// How the two detectors move: x1 = -x2 = x, x1 = x2 = x, or every (x1, x2) pair.
enum class ScanKind { Symmetric, Diagonal, Grid };

inline std::string to_string(ScanKind k) {
  switch (k) {
    case ScanKind::Symmetric: return "symmetric";
    case ScanKind::Diagonal: return "diagonal";
    case ScanKind::Grid: return "grid";
  }
  return "unknown";
}

class DetectionScan {
 public:
  /// `positions` are physical detector coordinates x, strictly increasing.
  DetectionScan(ScanKind kind, std::vector<double> positions, SlitGeometry geom, OpticalBench bench)
      : kind_(kind), positions_(std::move(positions)), geom_(geom), bench_(bench) {
    if (positions_.size() < 2) throw ConfigError("a scan needs at least two positions");
    for (std::size_t i = 1; i < positions_.size(); ++i)
      if (!(positions_[i] > positions_[i - 1])) throw ConfigError("scan positions must be strictly increasing");
  }

  /// `points` positions uniformly spaced over normalized X in [-x_max, x_max].
  static DetectionScan normalized(ScanKind kind, double x_max, std::size_t points, SlitGeometry geom,
                                  OpticalBench bench) {
    if (!(x_max > 0.0)) throw ConfigError("scan half-range must be positive");
    if (points < 2) throw ConfigError("a scan needs at least two positions");
    std::vector<double> xs(points);
    const double step = 2.0 * x_max / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
      // Index from the center so symmetric scans are exactly symmetric.
      const double X = (static_cast<double>(i) - 0.5 * static_cast<double>(points - 1)) * step;
      xs[i] = physical_position(X, geom, bench);
    }
    return DetectionScan(kind, std::move(xs), geom, bench);
  }

  ScanKind kind() const { return kind_; }
  const std::vector<double>& positions() const { return positions_; }
  const SlitGeometry& geometry() const { return geom_; }
  const OpticalBench& bench() const { return bench_; }

  /// Number of (x1, x2) evaluation points.
  std::size_t size() const {
    return kind_ == ScanKind::Grid ? positions_.size() * positions_.size() : positions_.size();
  }

  /// Detector pair of evaluation point i (row-major over x1, x2 for grid scans).
  std::pair<double, double> point(std::size_t i) const {
    switch (kind_) {
      case ScanKind::Symmetric: return {positions_[i], -positions_[i]};
      case ScanKind::Diagonal: return {positions_[i], positions_[i]};
      case ScanKind::Grid: {
        const std::size_t n = positions_.size();
        return {positions_[i / n], positions_[i % n]};
      }
    }
    return {0.0, 0.0};
  }

  std::vector<double> normalized_positions() const {
    std::vector<double> out(positions_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = normalized_position(positions_[i], geom_, bench_);
    return out;
  }

 private:
  ScanKind kind_;
  std::vector<double> positions_;
  SlitGeometry geom_;
  OpticalBench bench_;
};

/// Joint-intensity samples over a scan. Positions are in normalized X; for
/// grid scans values are row-major over (X1, X2).
struct FringePattern {
  ScanKind kind = ScanKind::Symmetric;
  std::vector<double> positions;
  std::vector<double> values;
  std::string normalization;

  double max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }

  FringePattern normalized_by_max() const {
    FringePattern out = *this;
    const double m = max_value();
    if (!(m > 0.0)) throw NumericalError("cannot normalize an all-zero pattern");
    for (double& v : out.values) v /= m;
    out.normalization = "normalized by pattern maximum (" + normalization + ")";
    return out;
  }
};

namespace detail {

// Kernel terms sampled once on the quadrature grid.
struct SampledTerm {
  Pairing pairing;
  bool delta = false;
  std::vector<double> density;
  double density_tail = 0.0;
  std::vector<complex> amplitude;
  complex amplitude_tail{};
};

inline std::vector<SampledTerm> sample_kernel(const FourthOrderKernel& kernel, const QGrid& grid) {
  std::vector<SampledTerm> out;
  for (const auto& term : kernel) {
    SampledTerm s{term.pairing};
    if (term.is_degenerate()) {
      const auto& d = term.density();
      s.delta = d.delta;
      if (!d.delta) {
        s.density.resize(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
          s.density[j] = d.value(grid[j]);
          if (!(s.density[j] >= 0.0)) throw ConfigError("degenerate term weight must be nonnegative");
        }
        s.density_tail = d.tail;
      }
    } else {
      const auto& c = term.amplitude();
      s.amplitude.resize(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) s.amplitude[j] = c.value(grid[j]);
      s.amplitude_tail = c.tail;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

inline constexpr const char* kUnscaledNote =
    "joint intensity without the k0^2/(2 pi f)^2 prefactor";

/// Evaluates the detection-plane fourth-order correlation
///   G(x1, x2) = ∫ T̃(u1-q1) T̃(u2-q2) T̃(u2-q'2) T̃(u1-q'1) K(q1,q2,q'2,q'1) d⁴q,  u = k0 x / f,
/// for kernels given as delta pairings, each pairing collapsed analytically to
/// products of one-dimensional overlap integrals. Construction runs the
/// Parseval self-test on the grid.
class FringeEngine {
 public:
  FringeEngine(SlitGeometry geom, OpticalBench bench, QGrid grid, unsigned workers = 1)
      : bench_(bench), integrator_(geom, std::move(grid)), workers_(workers) {
    integrator_.require_parseval();
  }

  const SlitGeometry& geometry() const { return integrator_.geometry(); }
  const OpticalBench& bench() const { return bench_; }
  const QGrid& grid() const { return integrator_.grid(); }
  const OverlapIntegrator& integrator() const { return integrator_; }

  double joint_intensity(const FourthOrderKernel& kernel, double x1, double x2) const {
    const auto sampled = detail::sample_kernel(kernel, grid());
    return evaluate(sampled, x1, x2);
  }

  FringePattern pattern(const FourthOrderKernel& kernel, const DetectionScan& scan) const {
    check_scan(scan);
    const auto sampled = detail::sample_kernel(kernel, grid());
    return assemble(scan, [&](double x1, double x2) { return evaluate(sampled, x1, x2); });
  }

  /// Thermal light evaluated straight from the spectrum:
  ///   G = ∫T̃²(u1-q)S dq · ∫T̃²(u2-q)S dq + [∫T̃(u1-q)T̃(u2-q)S dq]².
  FringePattern thermal(const SpatialSpectrum& spectrum, const DetectionScan& scan) const {
    check_scan(scan);
    if (auto g = spectrum.as_gaussian(); g && grid().spacing() > 0.5 * g->width)
      throw NumericalError("quadrature grid too coarse to resolve the Gaussian spectrum");
    const SlitGeometry geom = geometry();
    if (spectrum.is_delta()) {
      return assemble(scan, [&](double x1, double x2) {
        const double t1 = slit_fourier(bench_.spatial_frequency(x1), geom);
        const double t2 = slit_fourier(bench_.spatial_frequency(x2), geom);
        return 2.0 * t1 * t1 * t2 * t2;
      });
    }
    std::vector<double> s(grid().size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = spectrum.value(grid()[j]);
    return assemble(scan, [&](double x1, double x2) {
      const double u1 = bench_.spatial_frequency(x1);
      const double u2 = bench_.spatial_frequency(x2);
      const auto p1 = integrator_.shifted_profile(u1);
      const auto p2 = integrator_.shifted_profile(u2);
      const double a1 = integrator_.overlap<double>(p1, u1, p1, u1, s, 0.0);
      const double a2 = integrator_.overlap<double>(p2, u2, p2, u2, s, 0.0);
      const double cross = integrator_.overlap<double>(p1, u1, p2, u2, s, 0.0);
      return a1 * a2 + cross * cross;
    });
  }

  FringePattern spdc(const GainProfile& gain, Crystal crystal, const DetectionScan& scan) const {
    return pattern(spdc_kernel(gain, crystal, grid()), scan);
  }

 private:
  void check_scan(const DetectionScan& scan) const {
    if (scan.geometry().width() != geometry().width() || scan.geometry().separation() != geometry().separation())
      throw ConfigError("scan geometry does not match the engine geometry");
    if (scan.bench().wavenumber() != bench_.wavenumber() || scan.bench().focal_length() != bench_.focal_length())
      throw ConfigError("scan bench does not match the engine bench");
  }

  template <typename PointFn>
  FringePattern assemble(const DetectionScan& scan, PointFn&& fn) const {
    FringePattern out;
    out.kind = scan.kind();
    out.positions = scan.normalized_positions();
    out.values.assign(scan.size(), 0.0);
    out.normalization = kUnscaledNote;
    parallel_for(scan.size(), workers_, [&](std::size_t i) {
      const auto [x1, x2] = scan.point(i);
      out.values[i] = fn(x1, x2);
    });
    return out;
  }

  double evaluate(const std::vector<detail::SampledTerm>& terms, double x1, double x2) const {
    const SlitGeometry geom = geometry();
    const double u1 = bench_.spatial_frequency(x1);
    const double u2 = bench_.spatial_frequency(x2);
    std::optional<std::vector<double>> p1, p2, p2_mirror;
    auto profile = [this](std::optional<std::vector<double>>& slot, double a) -> const std::vector<double>& {
      if (!slot) slot = integrator_.shifted_profile(a);
      return *slot;
    };

    double total = 0.0;
    for (const auto& t : terms) {
      switch (t.pairing) {
        case Pairing::DegenerateDirect: {
          if (t.delta) {
            const double t1 = slit_fourier(u1, geom), t2 = slit_fourier(u2, geom);
            total += t1 * t1 * t2 * t2;
            break;
          }
          const auto& a = profile(p1, u1);
          const auto& b = profile(p2, u2);
          total += integrator_.overlap<double>(a, u1, a, u1, t.density, t.density_tail) *
                   integrator_.overlap<double>(b, u2, b, u2, t.density, t.density_tail);
          break;
        }
        case Pairing::DegenerateExchange: {
          if (t.delta) {
            const double t1 = slit_fourier(u1, geom), t2 = slit_fourier(u2, geom);
            total += t1 * t1 * t2 * t2;
            break;
          }
          const double cross = integrator_.overlap<double>(profile(p1, u1), u1, profile(p2, u2), u2, t.density,
                                                           t.density_tail);
          total += cross * cross;
          break;
        }
        case Pairing::Conserving: {
          // T̃(u2 + q) = T̃(-u2 - q): the partner photon sits at the mirrored wavevector.
          const complex pair = integrator_.overlap<complex>(profile(p1, u1), u1, profile(p2_mirror, -u2), -u2,
                                                            t.amplitude, t.amplitude_tail);
          total += std::norm(pair);
          break;
        }
      }
    }
    return total;
  }

  OpticalBench bench_;
  OverlapIntegrator integrator_;
  unsigned workers_;
};

/// Joint intensity at a single detector pair on the given grid.
inline double joint_intensity(const FourthOrderKernel& kernel, const SlitGeometry& geom, const OpticalBench& bench,
                              double x1, double x2, const QGrid& grid) {
  return FringeEngine(geom, bench, grid).joint_intensity(kernel, x1, x2);
}

inline FringePattern thermal_fringe(const SpatialSpectrum& spectrum, const DetectionScan& scan, const QGrid& grid) {
  return FringeEngine(scan.geometry(), scan.bench(), grid).thermal(spectrum, scan);
}

inline FringePattern thermal_fringe(const SpatialSpectrum& spectrum, const DetectionScan& scan) {
  return thermal_fringe(spectrum, scan, default_qgrid(spectrum, scan.geometry()));
}

namespace detail {
template <typename Fn>
FringePattern closed_form(const DetectionScan& scan, std::string note, Fn&& fn) {
  FringePattern out;
  out.kind = scan.kind();
  out.positions = scan.normalized_positions();
  out.values.resize(scan.size());
  out.normalization = std::move(note);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const auto [x1, x2] = scan.point(i);
    out.values[i] = fn(scan.bench().spatial_frequency(x1), scan.bench().spatial_frequency(x2));
  }
  return out;
}
}  // namespace detail

/// Flat-spectrum limit: T̃²(0) + T̃²[(k0/f)(x1 - x2)]. The constant equals the
/// oscillating term at x1 = x2, which fixes the shape; the scale is arbitrary.
inline FringePattern broadband_fringe(const DetectionScan& scan) {
  const SlitGeometry geom = scan.geometry();
  const double t0 = slit_fourier(0.0, geom);
  return detail::closed_form(scan, "broadband shape T~^2(0) + T~^2(u1 - u2), scale-free",
                             [&](double u1, double u2) {
                               const double t = slit_fourier(u1 - u2, geom);
                               return t0 * t0 + t * t;
                             });
}

/// Ideal entangled pair: T̃²[(k0/f)(x1 + x2)], scale-free.
inline FringePattern entangled_fringe(const DetectionScan& scan) {
  const SlitGeometry geom = scan.geometry();
  return detail::closed_form(scan, "entangled shape T~^2(u1 + u2), scale-free", [&](double u1, double u2) {
    const double t = slit_fourier(u1 + u2, geom);
    return t * t;
  });
}

inline FringePattern spdc_fringe(const GainProfile& gain, Crystal crystal, const DetectionScan& scan,
                                 const QGrid& grid) {
  return FringeEngine(scan.geometry(), scan.bench(), grid).spdc(gain, crystal, scan);
}

/// Default grid for down-converted light: covers the gain profile's extent.
inline QGrid default_qgrid(const GainProfile& gain, const SlitGeometry& geom) {
  const double q_max = std::max(gain.extent(), 40.0 * std::numbers::pi / geom.width());
  return QGrid(q_max, grid_count_for_spacing(q_max, gain.extent() > 0.0 ? gain.extent() / 64.0 : 0.0));
}

}  // namespace ghostfringe
