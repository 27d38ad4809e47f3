#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "ghostfringe/error.hpp"

namespace ghostfringe {

/// Normalized Gaussian S(q) = exp(-q²/2w²) / (√(2π) w).
struct GaussianSpectrum {
  double width;
};

/// Monochromatic plane-wave limit S(q) = δ(q). Has no pointwise density.
struct DeltaSpectrum {};

/// Samples on a strictly increasing q grid, linearly interpolated, zero outside.
struct TabulatedSpectrum {
  std::vector<double> q;
  std::vector<double> values;
};

/// Power spectrum of the transverse spatial frequencies of a source.
class SpatialSpectrum {
 public:
  static SpatialSpectrum gaussian(double width) {
    if (!(width > 0.0) || !std::isfinite(width))
      throw ConfigError("Gaussian spectrum width must be positive and finite");
    return SpatialSpectrum(GaussianSpectrum{width});
  }

  static SpatialSpectrum delta() { return SpatialSpectrum(DeltaSpectrum{}); }

  static SpatialSpectrum tabulated(std::vector<double> q, std::vector<double> values) {
    if (q.size() < 2 || q.size() != values.size())
      throw ConfigError("tabulated spectrum needs >= 2 samples and matching sizes");
    for (std::size_t i = 1; i < q.size(); ++i)
      if (!(q[i] > q[i - 1])) throw ConfigError("tabulated spectrum grid must be strictly increasing");
    for (double s : values)
      if (!(s >= 0.0) || !std::isfinite(s))
        throw ConfigError("tabulated spectrum values must be finite and nonnegative");
    return SpatialSpectrum(TabulatedSpectrum{std::move(q), std::move(values)});
  }

  bool is_delta() const { return std::holds_alternative<DeltaSpectrum>(rep_); }
  bool is_gaussian() const { return std::holds_alternative<GaussianSpectrum>(rep_); }
  bool is_tabulated() const { return std::holds_alternative<TabulatedSpectrum>(rep_); }

  const GaussianSpectrum* as_gaussian() const { return std::get_if<GaussianSpectrum>(&rep_); }
  const TabulatedSpectrum* as_tabulated() const { return std::get_if<TabulatedSpectrum>(&rep_); }

  /// Pointwise density. Throws for the delta variant.
  double value(double q) const {
    return std::visit(
        [q](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, GaussianSpectrum>) {
            const double z = q / s.width;
            return std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi / (std::numbers::sqrt2 * s.width);
          } else if constexpr (std::is_same_v<T, DeltaSpectrum>) {
            throw ConfigError("delta spectrum has no pointwise density");
          } else {
            if (q < s.q.front() || q > s.q.back()) return 0.0;
            auto hi = std::upper_bound(s.q.begin(), s.q.end(), q);
            if (hi == s.q.end()) return s.values.back();
            const auto i = static_cast<std::size_t>(hi - s.q.begin());
            const double t = (q - s.q[i - 1]) / (s.q[i] - s.q[i - 1]);
            return (1.0 - t) * s.values[i - 1] + t * s.values[i];
          }
        },
        rep_);
  }

  /// Half-width of the q range that carries the spectrum (8σ for Gaussians).
  double support_halfwidth() const {
    if (auto g = as_gaussian()) return 8.0 * g->width;
    if (auto t = as_tabulated()) return std::max(std::abs(t->q.front()), std::abs(t->q.back()));
    return 0.0;
  }

 private:
  using Rep = std::variant<GaussianSpectrum, DeltaSpectrum, TabulatedSpectrum>;
  explicit SpatialSpectrum(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

inline double spectrum_value(double q, const SpatialSpectrum& spectrum) { return spectrum.value(q); }

}  // namespace ghostfringe
