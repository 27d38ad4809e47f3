#pragma once

#include <cmath>
#include <numbers>

#include "ghostfringe/error.hpp"

namespace ghostfringe {

/// Symmetric double slit: two slits of width b whose centers sit at ±d/2.
class SlitGeometry {
 public:
  SlitGeometry(double slit_width, double separation)
      : width_(slit_width), separation_(separation) {
    if (!(slit_width > 0.0) || !std::isfinite(slit_width))
      throw ConfigError("slit width must be positive and finite");
    if (!(separation > slit_width) || !std::isfinite(separation))
      throw ConfigError("slit separation must exceed the slit width");
  }

  double width() const { return width_; }
  double separation() const { return separation_; }

 private:
  double width_;
  double separation_;
};

/// Lens of focal length f in an f-f geometry, carrier wavenumber k0.
class OpticalBench {
 public:
  OpticalBench(double wavenumber, double focal_length)
      : k0_(wavenumber), f_(focal_length) {
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
      throw ConfigError("wavenumber k0 must be positive and finite");
    if (!(focal_length > 0.0) || !std::isfinite(focal_length))
      throw ConfigError("focal length must be positive and finite");
  }

  double wavenumber() const { return k0_; }
  double focal_length() const { return f_; }

  /// Transverse wavevector k0*x/f that a detector at x selects.
  double spatial_frequency(double x) const { return k0_ * x / f_; }

 private:
  double k0_;
  double f_;
};

/// sin(u)/u with a Taylor fallback around the removable singularity.
inline double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
  }
  return std::sin(u) / u;
}

/// Unit-height aperture: 1 inside either slit (edges included), else 0.
inline double slit_transmission(double x, const SlitGeometry& geom) {
  const double half_width = 0.5 * geom.width();
  const double center = 0.5 * geom.separation();
  const double dist = std::abs(std::abs(x) - center);
  return dist <= half_width ? 1.0 : 0.0;
}

/// Fourier transform of the double slit, convention (2π)^(-1/2) ∫ T(x) e^{-iqx} dx:
/// T̃(q) = (2b/√(2π)) sinc(qb/2) cos(qd/2).
inline double slit_fourier(double q, const SlitGeometry& geom) {
  const double b = geom.width();
  const double d = geom.separation();
  return 2.0 * b * std::numbers::inv_sqrtpi / std::numbers::sqrt2 * sinc(0.5 * q * b) *
         std::cos(0.5 * q * d);
}

// Normalized coordinates: X = x k0 b / (2π f), W = w b / (2π).

inline double normalized_position(double x, const SlitGeometry& geom, const OpticalBench& bench) {
  return x * bench.wavenumber() * geom.width() / (2.0 * std::numbers::pi * bench.focal_length());
}

inline double physical_position(double X, const SlitGeometry& geom, const OpticalBench& bench) {
  return X * 2.0 * std::numbers::pi * bench.focal_length() / (bench.wavenumber() * geom.width());
}

inline double normalized_bandwidth(double w, const SlitGeometry& geom) {
  return w * geom.width() / (2.0 * std::numbers::pi);
}

inline double physical_bandwidth(double W, const SlitGeometry& geom) {
  return W * 2.0 * std::numbers::pi / geom.width();
}

}  // namespace ghostfringe
