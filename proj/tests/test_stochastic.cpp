#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ghostfringe/fringe.hpp"
#include "ghostfringe/stochastic.hpp"

using namespace ghostfringe;
using std::numbers::pi;

namespace {
const SlitGeometry kGeom(1.0, 4.0);
const OpticalBench kBench(1.0, 1.0);
}  // namespace

TEST(RandomStream, IndependentAndReproducible) {
  auto a = RandomStream{5, 0}.engine();
  auto b = RandomStream{5, 0}.engine();
  auto c = RandomStream{5, 1}.engine();
  auto d = RandomStream{6, 0}.engine();
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(SampleField, SecondMoments) {
  const auto s = SpatialSpectrum::gaussian(2.0);
  const QGrid g = mc_grid(s, kGeom);
  const std::size_t M = 100000;
  const std::size_t j = g.center(), k = g.center() + 3;
  complex mean{}, cross{};
  double power = 0.0, power2 = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const auto f = sample_field(s, g, RandomStream{11, m});
    mean += f.amplitudes[j];
    const double p = std::norm(f.amplitudes[j]);
    power += p;
    power2 += p * p;
    cross += std::conj(f.amplitudes[j]) * f.amplitudes[k];
  }
  mean /= double(M);
  power /= double(M);
  cross /= double(M);
  const double sj = s.value(g[j]) * g.spacing(), sk = s.value(g[k]) * g.spacing();
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(sj / M));
  const double se = std::sqrt((power2 / M - power * power) / M);
  EXPECT_LE(std::abs(power - sj), 4.0 * se);
  EXPECT_LE(std::abs(cross), 4.0 * std::sqrt(sj * sk / M));
}

TEST(SampleField, DeltaRejected) {
  EXPECT_THROW(sample_field(SpatialSpectrum::delta(), QGrid(1.0, 3), RandomStream{}), ConfigError);
  EXPECT_THROW(mc_grid(SpatialSpectrum::delta(), kGeom), ConfigError);
}

TEST(Propagate, SingleModeAndLinearity) {
  const QGrid g(4.0, 9);
  FieldRealization f;
  f.amplitudes.assign(g.size(), complex{});
  f.amplitudes[g.center()] = {1.0, 0.0};
  std::vector<double> xs{-1.3, 0.0, 0.4, 2.2};
  const auto e = propagate_to_detector(f, g, kGeom, kBench, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(e[i].real(), slit_fourier(xs[i], kGeom), 1e-15);

  FieldRealization scaled = f;
  for (auto& a : scaled.amplitudes) a *= complex{0.0, -2.5};
  const auto es = propagate_to_detector(scaled, g, kGeom, kBench, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(std::abs(es[i] - complex{0.0, -2.5} * e[i]), 0.0, 1e-15);

  // excited mode at q0 peaks at x = f q0 / k0
  FieldRealization shifted;
  shifted.amplitudes.assign(g.size(), complex{});
  shifted.amplitudes[g.center() + 2] = {1.0, 0.0};
  std::vector<double> scan;
  for (int i = -400; i <= 400; ++i) scan.push_back(g[g.center() + 2] + 0.01 * i);
  const auto es2 = propagate_to_detector(shifted, g, kGeom, kBench, scan);
  std::size_t best = 0;
  for (std::size_t i = 0; i < es2.size(); ++i)
    if (std::norm(es2[i]) > std::norm(es2[best])) best = i;
  EXPECT_NEAR(scan[best], g[g.center() + 2], 1e-12);
}

TEST(RunningMoments, MergeMatchesSequential) {
  RunningMoments all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double v = std::sin(i * 0.37) * 3.0 + i * 0.01;
    all.push(v);
    (i < 37 ? a : b).push(v);
  }
  a.merge(b);
  EXPECT_NEAR(a.mean, all.mean, 1e-14);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-12);
}

TEST(Ensemble, DeterministicAcrossWorkerCounts) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 2.0);
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 21, kGeom, kBench);
  const auto one = estimate_joint_intensity(s, scan, 1000, 42, 1);
  const auto three = estimate_joint_intensity(s, scan, 1000, 42, 3);
  const auto again = estimate_joint_intensity(s, scan, 1000, 42, 1);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.standard_error, three.standard_error);
  EXPECT_EQ(one.mean, again.mean);
  const auto other = estimate_joint_intensity(s, scan, 1000, 43, 1);
  EXPECT_NE(one.mean, other.mean);
}

TEST(Ensemble, MatchesQuadratureInAbsoluteUnits) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 2.0);
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 21, kGeom, kBench);
  const auto quad = thermal_fringe(s, scan);
  const auto mc = estimate_joint_intensity(s, scan, 20000, 3);
  for (std::size_t i = 0; i < quad.values.size(); ++i)
    EXPECT_LE(std::abs(mc.mean[i] - quad.values[i]), 5.0 * mc.standard_error[i] + 1e-12) << "i=" << i;
}

TEST(Ensemble, ErrorShrinksLikeRootM) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 2.0);
  const auto scan = DetectionScan::normalized(ScanKind::Symmetric, 0.5, 11, kGeom, kBench);
  const auto a = estimate_joint_intensity(s, scan, 2000, 9);
  const auto b = estimate_joint_intensity(s, scan, 4000, 9);
  const double ratio = a.standard_error[5] / b.standard_error[5];
  EXPECT_NEAR(ratio, std::sqrt(2.0), 0.15);
}

TEST(Ensemble, CoincidentDetectorsBunch) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 2.0);
  const auto scan = DetectionScan::normalized(ScanKind::Diagonal, 0.05, 5, kGeom, kBench);
  const auto mc = estimate_joint_intensity(s, scan, 20000, 5);
  for (std::size_t i = 0; i < mc.mean.size(); ++i)
    EXPECT_NEAR(mc.mean[i] / (mc.mean_intensity1[i] * mc.mean_intensity2[i]), 2.0, 0.1);
}

TEST(MomentCheck, BatteryCoversPairings) {
  const auto s = SpatialSpectrum::gaussian(2.0 * pi * 2.0);
  const QGrid g = mc_grid(s, kGeom);
  const auto tuples = default_moment_battery(g, s);
  ASSERT_EQ(tuples.size(), 24u);
  const auto k = thermal_kernel(s);
  std::size_t zero = 0, both = 0;
  for (const auto& t : tuples) {
    const auto v = k.discrete_moment(g, t.j1, t.j2, t.k1, t.k2).real();
    zero += v == 0.0;
    both += (t.j1 == t.j2 && t.j1 == t.k1 && t.k1 == t.k2);
  }
  EXPECT_GE(zero, 4u);
  EXPECT_GE(both, 6u);
  const auto report = moment_check(s, g, tuples, 20000, 17, 1);
  EXPECT_LE(report.exceedances(4.0), 1u);
}
