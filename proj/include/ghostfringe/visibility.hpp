#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ghostfringe/error.hpp"
#include "ghostfringe/fringe.hpp"

namespace ghostfringe {

struct Extremum {
  double position;
  double value;
};

/// Fringe contrast diagnostics over a window of a 1D pattern.
struct VisibilityReport {
  double max_value = 0.0;
  double min_value = 0.0;
  double michelson = 0.0;      // (max - min) / (max + min)
  double depth = 0.0;          // (max - min) / max
  double peak_spacing = 0.0;   // mean spacing of adjacent interior maxima
  double central_peak_spacing = 0.0;  // mean distance from the maximum nearest 0 to its neighbours
  double dominant_period = 0.0;
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
};

namespace detail {

// Vertex of the parabola through three equally spaced samples around index i,
// polished on the quartic through five samples when both neighbours exist.
inline Extremum refine_extremum(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
  const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
  const double curvature = ym - 2.0 * y0 + yp;
  if (curvature == 0.0) return {x[i], y0};
  const double h = 0.5 * (x[i + 1] - x[i - 1]);
  double t = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
  if (i < 2 || i + 2 >= y.size()) return {x[i] + t * h, y0 - 0.25 * (ym - yp) * t};

  const double ymm = y[i - 2], ypp = y[i + 2];
  const double a1 = (ymm - 8.0 * ym + 8.0 * yp - ypp) / 12.0;
  const double a2 = (-ymm + 16.0 * ym - 30.0 * y0 + 16.0 * yp - ypp) / 24.0;
  const double a3 = (-ymm + 2.0 * ym - 2.0 * yp + ypp) / 12.0;
  const double a4 = (ymm - 4.0 * ym + 6.0 * y0 - 4.0 * yp + ypp) / 24.0;
  for (int it = 0; it < 30; ++it) {
    const double d1 = a1 + t * (2.0 * a2 + t * (3.0 * a3 + t * 4.0 * a4));
    const double d2 = 2.0 * a2 + t * (6.0 * a3 + t * 12.0 * a4);
    if (d2 == 0.0) break;
    const double next = std::clamp(t - d1 / d2, -1.0, 1.0);
    if (std::abs(next - t) < 1e-15) break;
    t = next;
  }
  return {x[i] + t * h, y0 + t * (a1 + t * (a2 + t * (a3 + t * a4)))};
}

}  // namespace detail

/// Power of the mean-subtracted samples at frequency `nu` (cycles per unit position).
inline double spectral_power(const std::vector<double>& x, const std::vector<double>& y, double nu) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  std::complex<double> acc{};
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += (y[i] - mean) * std::polar(1.0, -2.0 * std::numbers::pi * nu * x[i]);
  return std::norm(acc);
}

/// Extrema, contrast and period of a symmetric or diagonal scan inside [lo, hi].
/// Extrema are interior local extrema of the windowed samples, refined by a
/// three-point parabola; at least three maxima and one minimum are required.
inline VisibilityReport visibility(const FringePattern& pattern, double lo, double hi) {
  if (pattern.kind == ScanKind::Grid) throw ConfigError("visibility needs a one-dimensional scan");
  if (pattern.positions.size() != pattern.values.size()) throw ConfigError("pattern positions and values differ in size");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
    if (pattern.positions[i] >= lo && pattern.positions[i] <= hi) {
      x.push_back(pattern.positions[i]);
      y.push_back(pattern.values[i]);
    }
  }

  VisibilityReport r;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) r.maxima.push_back(detail::refine_extremum(x, y, i));
    if (y[i] < y[i - 1] && y[i] <= y[i + 1]) r.minima.push_back(detail::refine_extremum(x, y, i));
  }
  if (r.maxima.size() < 3 || r.minima.empty())
    throw ConfigError("visibility window holds " + std::to_string(r.maxima.size()) +
                      " interior maxima; at least 3 are required");

  r.max_value = r.maxima.front().value;
  for (const auto& m : r.maxima) r.max_value = std::max(r.max_value, m.value);
  r.min_value = std::max(0.0, r.minima.front().value);
  for (const auto& m : r.minima) r.min_value = std::min(r.min_value, std::max(0.0, m.value));
  if (!(r.max_value > 0.0)) throw NumericalError("pattern has no positive maximum in the window");
  r.michelson = (r.max_value - r.min_value) / (r.max_value + r.min_value);
  r.depth = (r.max_value - r.min_value) / r.max_value;

  r.peak_spacing = (r.maxima.back().position - r.maxima.front().position) / static_cast<double>(r.maxima.size() - 1);

  std::size_t c = 0;
  for (std::size_t i = 1; i < r.maxima.size(); ++i)
    if (std::abs(r.maxima[i].position) < std::abs(r.maxima[c].position)) c = i;
  double sum = 0.0;
  int count = 0;
  if (c > 0) sum += r.maxima[c].position - r.maxima[c - 1].position, ++count;
  if (c + 1 < r.maxima.size()) sum += r.maxima[c + 1].position - r.maxima[c].position, ++count;
  r.central_peak_spacing = sum / count;

  // Largest nonzero DFT bin of the windowed, mean-subtracted samples.
  const double span = (x.back() - x.front()) * static_cast<double>(x.size()) / static_cast<double>(x.size() - 1);
  double best = -1.0;
  for (std::size_t k = 1; k <= x.size() / 2; ++k) {
    const double p = spectral_power(x, y, static_cast<double>(k) / span);
    if (p > best) {
      best = p;
      r.dominant_period = span / static_cast<double>(k);
    }
  }
  return r;
}

/// Ratio of spectral power at 2ν0 to that at ν0, with ν0 = d/b the
/// single-beam fringe frequency in normalized X. Grows as the half-period
/// (subwavelength) component takes over.
inline double doubled_frequency_ratio(const FringePattern& pattern, const SlitGeometry& geom) {
  const double nu0 = geom.separation() / geom.width();
  return spectral_power(pattern.positions, pattern.values, 2.0 * nu0) /
         spectral_power(pattern.positions, pattern.values, nu0);
}

}  // namespace ghostfringe
