#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ghostfringe/fringe.hpp"

using namespace ghostfringe;
using std::numbers::pi;

namespace {
const SlitGeometry kGeom(1.0, 4.0);
const OpticalBench kBench(1.0, 1.0);

double max_rel_diff(const FringePattern& a, const FringePattern& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]) / std::max(std::abs(b.values[i]), 1e-300));
  return worst;
}

double max_abs_diff(const FringePattern& a, const FringePattern& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  return worst;
}

double T(double q) { return slit_fourier(q, kGeom); }
}  // namespace

TEST(DetectionScan, Layouts) {
  const auto sym = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 5, kGeom, kBench);
  ASSERT_EQ(sym.size(), 5u);
  EXPECT_EQ(sym.point(0).first, -sym.point(0).second);
  EXPECT_EQ(sym.point(2).first, 0.0);
  EXPECT_EQ(sym.normalized_positions()[4], 0.5);
  EXPECT_EQ(sym.normalized_positions()[0], -sym.normalized_positions()[4]);
  const auto diag = DetectionScan::normalized(ScanKind::Diagonal, 0.5, 5, kGeom, kBench);
  EXPECT_EQ(diag.point(1).first, diag.point(1).second);
  const auto grid = DetectionScan::normalized(ScanKind::Grid, 0.5, 3, kGeom, kBench);
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_EQ(grid.point(1).first, grid.point(0).first);
  EXPECT_EQ(grid.point(3).first, grid.point(4).first);
  EXPECT_THROW(DetectionScan(ScanKind::Symmetric, {1.0, 1.0}, kGeom, kBench), ConfigError);
  EXPECT_THROW(DetectionScan(ScanKind::Symmetric, {1.0}, kGeom, kBench), ConfigError);
}

TEST(FringeEngine, EntangledNullAndPeak) {
  const FringeEngine engine(kGeom, kBench, default_qgrid(kGeom));
  const auto k = entangled_kernel();
  const double peak = engine.joint_intensity(k, 0.3, -0.3);
  EXPECT_NEAR(peak, 2.0 * pi * T(0.0) * T(0.0), 1e-9 * peak);
  // (k0/f)(x1 + x2) = π/d
  const double s = pi / 4.0;
  EXPECT_LE(std::abs(engine.joint_intensity(k, 0.2, s - 0.2)), 1e-8 * peak);
  EXPECT_LE(std::abs(engine.joint_intensity(k, -1.0, s + 1.0)), 1e-8 * peak);
  for (double x1 : {-0.9, 0.1, 0.7}) EXPECT_LE(engine.joint_intensity(k, x1, 0.37 - x1), peak * (1 + 1e-9));
}

TEST(FringeEngine, ThermalDeltaFactorizes) {
  const FringeEngine engine(kGeom, kBench, default_qgrid(kGeom));
  const auto k = thermal_kernel(SpatialSpectrum::delta());
  for (auto [x1, x2] : {std::pair{0.0, 0.0}, {0.4, -1.1}, {2.3, 0.9}}) {
    const double expect = 2.0 * T(x1) * T(x1) * T(x2) * T(x2);
    EXPECT_NEAR(engine.joint_intensity(k, x1, x2), expect, 1e-14);
  }
}

TEST(FringeEngine, ThermalEqualPositionsDoubleDirect) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 0.6);
  const FringeEngine engine(kGeom, kBench, default_qgrid(s, kGeom));
  const auto k = thermal_kernel(s);
  for (double x : {0.0, 0.8, -2.0}) {
    const double direct = engine.joint_intensity(k.without(Pairing::DegenerateExchange), x, x);
    EXPECT_NEAR(engine.joint_intensity(k, x, x), 2.0 * direct, 1e-12 * direct);
  }
}

TEST(FringeEngine, KernelPathMatchesDirectThermal) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 2.0);
  const FringeEngine engine(kGeom, kBench, default_qgrid(s, kGeom));
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 41, kGeom, kBench);
  EXPECT_LE(max_rel_diff(engine.pattern(thermal_kernel(s), scan), engine.thermal(s, scan)), 1e-9);
}

TEST(FringeEngine, NarrowBandApproachesDelta) {
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 21, kGeom, kBench);
  const auto narrow = thermal_fringe(SpatialSpectrum::gaussian(1e-4 * 2.0 * pi), scan).normalized_by_max();
  const auto delta = thermal_fringe(SpatialSpectrum::delta(), scan).normalized_by_max();
  EXPECT_LE(max_abs_diff(narrow, delta), 1e-3);
}

TEST(FringeEngine, DependenceSplit) {
  const FringeEngine engine(kGeom, kBench, default_qgrid(kGeom));
  const auto ent = entangled_kernel();
  for (double d : {0.13, -0.6, 1.7}) {
    const double base = engine.joint_intensity(ent, 0.4, 0.25);
    EXPECT_NEAR(engine.joint_intensity(ent, 0.4 + d, 0.25 - d), base, 1e-9 * base);
  }
  // Broadband exchange term depends on x1 - x2 only.
  const auto scan1 = DetectionScan(ScanKind::Symmetric, {0.1, 0.5, 1.2}, kGeom, kBench);
  const auto b = broadband_fringe(scan1);
  for (double d : {0.3, -0.9}) {
    for (std::size_t i = 0; i < scan1.size(); ++i) {
      const auto [x1, x2] = scan1.point(i);
      const double t = T(x1 + d - (x2 + d));
      EXPECT_NEAR(b.values[i], T(0) * T(0) + t * t, 1e-15);
    }
  }
}

TEST(FringeEngine, EntangledMatchesClosedForm) {
  const FringeEngine engine(kGeom, kBench, default_qgrid(kGeom));
  const auto scan = DetectionScan::normalized(ScanKind::Grid, 0.5, 21, kGeom, kBench);
  const auto got = engine.pattern(entangled_kernel(), scan).normalized_by_max();
  const auto want = entangled_fringe(scan).normalized_by_max();
  EXPECT_LE(max_abs_diff(got, want), 1e-9);
}

TEST(FringeEngine, WorkerCountDoesNotChangeValues) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi);
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 33, kGeom, kBench);
  const auto one = FringeEngine(kGeom, kBench, default_qgrid(s, kGeom), 1).thermal(s, scan);
  const auto four = FringeEngine(kGeom, kBench, default_qgrid(s, kGeom), 4).thermal(s, scan);
  EXPECT_EQ(one.values, four.values);
}

TEST(FringeEngine, CoarseGridRejected) {
  EXPECT_THROW(FringeEngine(kGeom, kBench, QGrid(40.0 * pi, 31)), NumericalError);
  const auto s = SpatialSpectrum::gaussian(0.1);
  const FringeEngine engine(kGeom, kBench, default_qgrid(kGeom));
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 5, kGeom, kBench);
  EXPECT_THROW(engine.thermal(s, scan), NumericalError);
}

TEST(FringeEngine, SpdcTypeTwoHasNoExchange) {
  const auto g = GainProfile::gaussian(0.4, 4.0 * pi);
  const auto grid = default_qgrid(g, kGeom);
  const FringeEngine engine(kGeom, kBench, grid);
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 41, kGeom, kBench);
  const auto k2 = spdc_kernel(g, Crystal::TypeII, grid);
  EXPECT_EQ(engine.pattern(k2, scan).values, engine.pattern(k2.without(Pairing::DegenerateExchange), scan).values);
  const auto k1 = spdc_kernel(g, Crystal::TypeI, grid);
  EXPECT_LE(max_rel_diff(engine.pattern(k1.without(Pairing::DegenerateExchange), scan), engine.pattern(k2, scan)),
            1e-14);
}

TEST(FringeEngine, SpdcLowGainApproachesEntangled) {
  const auto g = GainProfile::flat(1e-3);
  const auto grid = default_qgrid(g, kGeom);
  const auto scan = DetectionScan::normalized(ScanKind::Diagonal, 0.5, 81, kGeom, kBench);
  const auto got = spdc_fringe(g, Crystal::TypeI, scan, grid).normalized_by_max();
  const auto want = entangled_fringe(scan).normalized_by_max();
  EXPECT_LE(max_abs_diff(got, want), 1e-4);
}

TEST(FringeEngine, BroadbandHalfContrast) {
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 401, kGeom, kBench);
  const auto b = broadband_fringe(scan);
  double lo = 1e300, hi = 0.0;
  for (double v : b.values) lo = std::min(lo, v), hi = std::max(hi, v);
  EXPECT_NEAR(hi, 2.0 * T(0) * T(0), 1e-15);
  EXPECT_NEAR(lo, T(0) * T(0), 1e-15);
}
