#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "ghostfringe/error.hpp"
#include "ghostfringe/optics.hpp"
#include "ghostfringe/spectrum.hpp"

namespace ghostfringe {

/// Uniform transverse-wavevector grid on [-q_max, q_max] with an odd point
/// count, so q = 0 is a node and q_j = -q_{n-1-j} holds exactly.
class QGrid {
 public:
  QGrid(double q_max, std::size_t n) : q_max_(q_max) {
    if (!(q_max > 0.0) || !std::isfinite(q_max)) throw ConfigError("q_max must be positive and finite");
    if (n < 3 || n % 2 == 0) throw ConfigError("grid point count must be odd and >= 3");
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    spacing_ = q_max / static_cast<double>(half);
    points_.resize(n);
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
      points_[static_cast<std::size_t>(j)] = static_cast<double>(j - half) * spacing_;
    points_.front() = -q_max;
    points_.back() = q_max;
  }

  std::size_t size() const { return points_.size(); }
  double spacing() const { return spacing_; }
  double q_max() const { return q_max_; }
  double operator[](std::size_t j) const { return points_[j]; }
  std::span<const double> points() const { return points_; }
  std::size_t center() const { return points_.size() / 2; }
  std::size_t mirror(std::size_t j) const { return points_.size() - 1 - j; }

  /// Composite Simpson weight of node j (1,4,2,4,...,4,1 times Δq/3).
  double simpson_weight(std::size_t j) const {
    const double h3 = spacing_ / 3.0;
    if (j == 0 || j + 1 == points_.size()) return h3;
    return (j % 2 == 1) ? 4.0 * h3 : 2.0 * h3;
  }

 private:
  double q_max_;
  double spacing_{};
  std::vector<double> points_;
};

inline QGrid make_qgrid(double q_max, std::size_t n) { return QGrid(q_max, n); }

/// Composite Simpson sum of samples taken on the grid nodes.
template <typename T>
T simpson(std::span<const T> samples, const QGrid& grid) {
  if (samples.size() != grid.size()) throw ConfigError("sample count does not match grid");
  T odd{}, even{};
  const std::size_t n = samples.size();
  for (std::size_t j = 1; j + 1 < n; j += 2) odd += samples[j];
  for (std::size_t j = 2; j + 1 < n; j += 2) even += samples[j];
  return (samples.front() + samples.back() + 4.0 * odd + 2.0 * even) * (grid.spacing() / 3.0);
}

/// Smallest odd count >= 4001 whose spacing is at most `max_spacing` on [-q_max, q_max].
inline std::size_t grid_count_for_spacing(double q_max, double max_spacing) {
  std::size_t n = 4001;
  if (max_spacing > 0.0) {
    const double needed = std::ceil(2.0 * q_max / max_spacing) + 1.0;
    if (needed > static_cast<double>(n)) n = static_cast<std::size_t>(needed);
  }
  if (n % 2 == 0) ++n;
  return n;
}

/// Default quadrature grid: q_max = max(support, 40π/b); n = 4001 unless the
/// spectrum is narrow enough that Δq must shrink to w/8.
inline QGrid default_qgrid(const SpatialSpectrum& spectrum, const SlitGeometry& geom) {
  const double q_max = std::max(spectrum.support_halfwidth(), 40.0 * std::numbers::pi / geom.width());
  double max_spacing = 0.0;
  if (auto g = spectrum.as_gaussian()) max_spacing = g->width / 8.0;
  if (auto t = spectrum.as_tabulated()) {
    double smallest = t->q.back() - t->q.front();
    for (std::size_t i = 1; i < t->q.size(); ++i) smallest = std::min(smallest, t->q[i] - t->q[i - 1]);
    max_spacing = smallest;
  }
  return QGrid(q_max, grid_count_for_spacing(q_max, max_spacing));
}

inline QGrid default_qgrid(const SlitGeometry& geom) {
  return default_qgrid(SpatialSpectrum::delta(), geom);
}

}  // namespace ghostfringe
