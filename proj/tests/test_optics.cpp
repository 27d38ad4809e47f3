#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ghostfringe/optics.hpp"

using namespace ghostfringe;
using std::numbers::pi;

namespace {
const SlitGeometry kGeom(1.0, 4.0);
}

TEST(SlitGeometry, RejectsOverlappingSlits) {
  EXPECT_THROW(SlitGeometry(1.0, 1.0), ConfigError);
  EXPECT_THROW(SlitGeometry(0.0, 4.0), ConfigError);
  EXPECT_THROW(SlitGeometry(-1.0, 4.0), ConfigError);
  EXPECT_NO_THROW(SlitGeometry(1.0, 1.5));
}

TEST(SlitTransmission, OpenOnlyInsideSlits) {
  EXPECT_EQ(slit_transmission(0.0, kGeom), 0.0);
  EXPECT_EQ(slit_transmission(2.0, kGeom), 1.0);
  EXPECT_EQ(slit_transmission(-2.0, kGeom), 1.0);
  EXPECT_EQ(slit_transmission(2.6, kGeom), 0.0);
  EXPECT_EQ(slit_transmission(1.4, kGeom), 0.0);
  EXPECT_EQ(slit_transmission(2.5, kGeom), 1.0);
}

TEST(SlitFourier, KnownValues) {
  EXPECT_NEAR(slit_fourier(0.0, kGeom), 2.0 / std::sqrt(2.0 * pi), 1e-15);
  EXPECT_NEAR(slit_fourier(pi / 4.0, kGeom), 0.0, 1e-15);
  EXPECT_NEAR(slit_fourier(2.0 * pi, kGeom), 0.0, 1e-15);
}

// Direct midpoint quadrature of the transform of the slit mask.
TEST(SlitFourier, MatchesNumericalTransformOfMask) {
  for (double q : {0.3, 1.1, -2.7, 5.0}) {
    const int n = 200000;
    double acc = 0.0;
    for (int s : {-1, 1}) {
      const double lo = s * 2.0 - 0.5, h = 1.0 / n;
      for (int i = 0; i < n; ++i) acc += std::cos(q * (lo + (i + 0.5) * h)) * h;
    }
    EXPECT_NEAR(slit_fourier(q, kGeom), acc / std::sqrt(2.0 * pi), 1e-9) << "q=" << q;
  }
}

TEST(SlitFourier, EvenAndZeroSet) {
  for (double q : {0.1, 0.7, 3.3, 12.0}) EXPECT_DOUBLE_EQ(slit_fourier(q, kGeom), slit_fourier(-q, kGeom));
  // cos(qd/2) zeros at q = (2n+1)π/d, sinc zeros at q = 2πm/b.
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(slit_fourier((2 * n + 1) * pi / 4.0, kGeom), 0.0, 1e-14);
  for (int m = 1; m < 6; ++m) EXPECT_NEAR(slit_fourier(2.0 * pi * m, kGeom), 0.0, 1e-14);
}

TEST(Sinc, SmoothThroughOrigin) {
  EXPECT_EQ(sinc(0.0), 1.0);
  for (double u : {1e-5, 9.9e-5, 1.01e-4, 1e-3}) EXPECT_NEAR(sinc(u), std::sin(u) / u, 2e-16);
}

TEST(Normalization, RoundTrip) {
  const OpticalBench bench(3.0, 0.5);
  const SlitGeometry g(0.7, 2.1);
  for (double X : {-0.4, 0.0, 0.125, 1.3}) {
    const double x = physical_position(X, g, bench);
    EXPECT_NEAR(normalized_position(x, g, bench), X, 1e-15);
    // u = 2πX/b
    EXPECT_NEAR(bench.spatial_frequency(x), 2.0 * pi * X / g.width(), 1e-12);
  }
  EXPECT_NEAR(normalized_bandwidth(physical_bandwidth(2.0, g), g), 2.0, 1e-15);
  EXPECT_NEAR(physical_bandwidth(1.0, g), 2.0 * pi / 0.7, 1e-12);
}
