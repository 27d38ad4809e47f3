#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ghostfringe/error.hpp"
#include "ghostfringe/fringe.hpp"
#include "ghostfringe/kernel.hpp"
#include "ghostfringe/optics.hpp"
#include "ghostfringe/parallel.hpp"
#include "ghostfringe/qgrid.hpp"
#include "ghostfringe/spectrum.hpp"

namespace ghostfringe {

/// One independent random stream per (seed, index) pair.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  std::mt19937_64 engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9e3779b9u};
    return std::mt19937_64(seq);
  }
};

/// Cell amplitudes a_j = E(q_j) Δq of one thermal field, so that
/// ⟨a*_j a_k⟩ = S(q_j) Δq δ_jk.
struct FieldRealization {
  std::vector<complex> amplitudes;
};

/// Mode grid for Monte Carlo sampling. For a Gaussian spectrum of width w the
/// detected intensities are Riemann sums of functions whose q-spectrum is
/// confined to |x| <= b + d (broadened by 1/w), so Δq = 2π/(b + d + 8/w)
/// keeps aliasing below e^-32 while using far fewer modes than quadrature.
inline QGrid mc_grid(const SpatialSpectrum& spectrum, const SlitGeometry& geom) {
  const double band = geom.width() + geom.separation();
  if (auto g = spectrum.as_gaussian()) {
    const double q_max = 6.5 * g->width;
    const double dq = 2.0 * std::numbers::pi / (band + 8.0 / g->width);
    auto half = static_cast<std::size_t>(std::ceil(q_max / dq));
    return QGrid(static_cast<double>(half) * dq, 2 * std::max<std::size_t>(half, 1) + 1);
  }
  if (auto t = spectrum.as_tabulated()) {
    double dq = std::numbers::pi / band;
    for (std::size_t i = 1; i < t->q.size(); ++i) dq = std::min(dq, t->q[i] - t->q[i - 1]);
    const double q_max = spectrum.support_halfwidth();
    auto half = static_cast<std::size_t>(std::ceil(q_max / dq));
    return QGrid(static_cast<double>(half) * dq, 2 * std::max<std::size_t>(half, 1) + 1);
  }
  throw ConfigError("a delta spectrum has no ensemble to sample; use the analytic path");
}

/// Circular complex Gaussian draw per mode: real and imaginary parts
/// independent with variance S(q_j) Δq / 2 each.
inline FieldRealization sample_field(const SpatialSpectrum& spectrum, const QGrid& grid, const RandomStream& stream) {
  if (spectrum.is_delta()) throw ConfigError("a delta spectrum has no ensemble to sample; use the analytic path");
  auto rng = stream.engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  FieldRealization field;
  field.amplitudes.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double sigma = std::sqrt(0.5 * spectrum.value(grid[j]) * grid.spacing());
    const double re = normal(rng);
    const double im = normal(rng);
    field.amplitudes[j] = complex{sigma * re, sigma * im};
  }
  return field;
}

/// Detected amplitudes E_d(x_i) = Σ_j T̃(k0 x_i / f - q_j) a_j for a fixed set
/// of detector positions; the transfer matrix is built once.
class DetectorPropagator {
 public:
  DetectorPropagator(const QGrid& grid, const SlitGeometry& geom, const OpticalBench& bench,
                     std::span<const double> positions)
      : rows_(positions.size()), cols_(grid.size()), transfer_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      const double u = bench.spatial_frequency(positions[i]);
      for (std::size_t j = 0; j < cols_; ++j) transfer_[i * cols_ + j] = slit_fourier(u - grid[j], geom);
    }
  }

  std::size_t size() const { return rows_; }

  void apply(const FieldRealization& field, std::vector<complex>& out) const {
    if (field.amplitudes.size() != cols_) throw ConfigError("field does not match the propagator grid");
    re_.resize(cols_);
    im_.resize(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
      re_[j] = field.amplitudes[j].real();
      im_[j] = field.amplitudes[j].imag();
    }
    out.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* row = &transfer_[i * cols_];
      double sr = 0.0, si = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        sr += row[j] * re_[j];
        si += row[j] * im_[j];
      }
      out[i] = complex{sr, si};
    }
  }

  std::vector<complex> apply(const FieldRealization& field) const {
    std::vector<complex> out;
    apply(field, out);
    return out;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> transfer_;
  mutable std::vector<double> re_, im_;
};

inline std::vector<complex> propagate_to_detector(const FieldRealization& field, const QGrid& grid,
                                                  const SlitGeometry& geom, const OpticalBench& bench,
                                                  std::span<const double> positions) {
  return DetectorPropagator(grid, geom, bench, positions).apply(field);
}

/// Streaming mean/variance (Welford) with an order-fixed merge.
struct RunningMoments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double v) {
    count += 1.0;
    const double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  }

  void merge(const RunningMoments& o) {
    if (o.count == 0.0) return;
    const double n = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / n;
    m2 += o.m2 + delta * delta * count * o.count / n;
    count = n;
  }

  double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
  double standard_error() const { return count > 1.0 ? std::sqrt(variance() / count) : 0.0; }
};

struct EnsembleEstimate {
  ScanKind kind = ScanKind::Symmetric;
  std::vector<double> positions;        // normalized X
  std::vector<double> mean;             // ⟨I(x1) I(x2)⟩
  std::vector<double> standard_error;
  std::vector<double> mean_intensity1;  // ⟨I(x1)⟩
  std::vector<double> mean_intensity2;  // ⟨I(x2)⟩
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
};

/// Realizations per reduction chunk. Fixed so results do not depend on the worker count.
inline constexpr std::size_t kRealizationChunk = 256;

/// Monte Carlo estimate of the joint intensity over a scan. Realization m
/// draws from RandomStream{seed, m}; chunk partials are merged in chunk order.
inline EnsembleEstimate estimate_joint_intensity(const SpatialSpectrum& spectrum, const DetectionScan& scan,
                                                 std::size_t realizations, std::uint64_t seed, const QGrid& grid,
                                                 unsigned workers = 0) {
  if (realizations < 2) throw ConfigError("need at least two realizations");
  if (spectrum.is_delta()) throw ConfigError("a delta spectrum has no ensemble to sample; use the analytic path");

  // Unique detector positions and, per scan point, the indices of x1 and x2.
  std::map<double, std::size_t> slot;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const auto [x1, x2] = scan.point(i);
    slot.emplace(x1, 0);
    slot.emplace(x2, 0);
  }
  std::vector<double> detectors;
  for (auto& [x, idx] : slot) {
    idx = detectors.size();
    detectors.push_back(x);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs(scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const auto [x1, x2] = scan.point(i);
    pairs[i] = {slot.at(x1), slot.at(x2)};
  }

  const DetectorPropagator prototype(grid, scan.geometry(), scan.bench(), detectors);
  const std::size_t points = scan.size();
  const std::size_t chunks = (realizations + kRealizationChunk - 1) / kRealizationChunk;
  struct Partial {
    std::vector<RunningMoments> joint, first, second;
  };
  std::vector<Partial> partials(chunks);

  parallel_chunks(chunks, workers, [&](std::size_t c) {
    const DetectorPropagator propagator = prototype;
    Partial& p = partials[c];
    p.joint.assign(points, {});
    p.first.assign(points, {});
    p.second.assign(points, {});
    std::vector<complex> detected;
    std::vector<double> intensity(detectors.size());
    const std::size_t end = std::min(realizations, (c + 1) * kRealizationChunk);
    for (std::size_t m = c * kRealizationChunk; m < end; ++m) {
      propagator.apply(sample_field(spectrum, grid, RandomStream{seed, m}), detected);
      for (std::size_t k = 0; k < detected.size(); ++k) intensity[k] = std::norm(detected[k]);
      for (std::size_t i = 0; i < points; ++i) {
        const double i1 = intensity[pairs[i].first];
        const double i2 = intensity[pairs[i].second];
        p.joint[i].push(i1 * i2);
        p.first[i].push(i1);
        p.second[i].push(i2);
      }
    }
  });

  std::vector<RunningMoments> joint(points), first(points), second(points);
  for (const auto& p : partials) {
    for (std::size_t i = 0; i < points; ++i) {
      joint[i].merge(p.joint[i]);
      first[i].merge(p.first[i]);
      second[i].merge(p.second[i]);
    }
  }

  EnsembleEstimate est;
  est.kind = scan.kind();
  est.positions = scan.normalized_positions();
  est.realizations = realizations;
  est.seed = seed;
  for (std::size_t i = 0; i < points; ++i) {
    est.mean.push_back(joint[i].mean);
    est.standard_error.push_back(joint[i].standard_error());
    est.mean_intensity1.push_back(first[i].mean);
    est.mean_intensity2.push_back(second[i].mean);
  }
  return est;
}

inline EnsembleEstimate estimate_joint_intensity(const SpatialSpectrum& spectrum, const DetectionScan& scan,
                                                 std::size_t realizations, std::uint64_t seed,
                                                 unsigned workers = 0) {
  return estimate_joint_intensity(spectrum, scan, realizations, seed, mc_grid(spectrum, scan.geometry()), workers);
}

/// Mode indices (j1, j2, k1, k2) of the moment ⟨a*_{j1} a*_{j2} a_{k1} a_{k2}⟩.
struct MomentTuple {
  std::size_t j1, j2, k1, k2;
};

struct MomentCheckRow {
  MomentTuple tuple;
  complex sampled;
  double predicted;
  double standard_error;
  double z;
};

struct MomentCheckReport {
  std::vector<MomentCheckRow> rows;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;

  std::size_t exceedances(double z_limit) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += (r.z > z_limit);
    return n;
  }
};

/// Samples the fourth moments of the thermal field and compares them with the
/// Gaussian factorization S(q1)Δq S(q2)Δq [δ_{j1k1} δ_{j2k2} + δ_{j1k2} δ_{j2k1}].
inline MomentCheckReport moment_check(const SpatialSpectrum& spectrum, const QGrid& grid,
                                      const std::vector<MomentTuple>& tuples, std::size_t realizations,
                                      std::uint64_t seed, unsigned workers = 0) {
  if (realizations < 2) throw ConfigError("need at least two realizations");
  for (const auto& t : tuples)
    if (std::max({t.j1, t.j2, t.k1, t.k2}) >= grid.size()) throw ConfigError("moment tuple index outside grid");

  const FourthOrderKernel predicted = thermal_kernel(spectrum);
  const std::size_t chunks = (realizations + kRealizationChunk - 1) / kRealizationChunk;
  // Real and imaginary parts accumulated separately, per tuple, per chunk.
  std::vector<std::vector<RunningMoments>> partial_re(chunks), partial_im(chunks);
  parallel_chunks(chunks, workers, [&](std::size_t c) {
    partial_re[c].assign(tuples.size(), {});
    partial_im[c].assign(tuples.size(), {});
    const std::size_t end = std::min(realizations, (c + 1) * kRealizationChunk);
    for (std::size_t m = c * kRealizationChunk; m < end; ++m) {
      const auto field = sample_field(spectrum, grid, RandomStream{seed, m});
      const auto& a = field.amplitudes;
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        const auto& q = tuples[t];
        const complex v = std::conj(a[q.j1]) * std::conj(a[q.j2]) * a[q.k1] * a[q.k2];
        partial_re[c][t].push(v.real());
        partial_im[c][t].push(v.imag());
      }
    }
  });

  MomentCheckReport report;
  report.realizations = realizations;
  report.seed = seed;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    RunningMoments re, im;
    for (std::size_t c = 0; c < chunks; ++c) {
      re.merge(partial_re[c][t]);
      im.merge(partial_im[c][t]);
    }
    const auto& q = tuples[t];
    const double expected = predicted.discrete_moment(grid, q.j1, q.j2, q.k1, q.k2).real();
    const complex sampled{re.mean, im.mean};
    const double se = std::sqrt(re.variance() / re.count + im.variance() / im.count);
    const double z = se > 0.0 ? std::abs(sampled - expected) / se : 0.0;
    report.rows.push_back({q, sampled, expected, se, z});
  }
  return report;
}

/// 24 tuples over six modes near the spectrum center: 6 coincident (q,q,q,q),
/// 6 direct (q1,q2,q1,q2), 6 exchange (q1,q2,q2,q1) and 6 with no surviving
/// pairing (all distinct or unbalanced).
inline std::vector<MomentTuple> default_moment_battery(const QGrid& grid, const SpatialSpectrum& spectrum) {
  double scale = 4.0 * grid.spacing();
  if (auto g = spectrum.as_gaussian()) scale = g->width;
  const auto step = static_cast<std::ptrdiff_t>(std::max(1.0, std::floor(0.3 * scale / grid.spacing())));
  const auto c = static_cast<std::ptrdiff_t>(grid.center());
  std::vector<std::size_t> m;
  for (std::ptrdiff_t k : {0, 1, -2, 3, -4, 5}) {
    const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(c + k * step, 0, static_cast<std::ptrdiff_t>(grid.size()) - 1);
    m.push_back(static_cast<std::size_t>(j));
  }
  std::vector<MomentTuple> out;
  for (std::size_t i = 0; i < 6; ++i) out.push_back({m[i], m[i], m[i], m[i]});
  for (std::size_t i = 0; i < 6; ++i) out.push_back({m[i], m[(i + 1) % 6], m[i], m[(i + 1) % 6]});
  for (std::size_t i = 0; i < 6; ++i) out.push_back({m[i], m[(i + 2) % 6], m[(i + 2) % 6], m[i]});
  out.push_back({m[0], m[1], m[2], m[3]});
  out.push_back({m[1], m[2], m[3], m[4]});
  out.push_back({m[2], m[3], m[4], m[5]});
  out.push_back({m[0], m[2], m[4], m[5]});
  out.push_back({m[0], m[0], m[0], m[1]});
  out.push_back({m[0], m[0], m[1], m[1]});
  return out;
}

}  // namespace ghostfringe
