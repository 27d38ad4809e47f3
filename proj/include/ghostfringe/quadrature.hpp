#pragma once

#include <gsl/gsl_sf_expint.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ghostfringe/error.hpp"
#include "ghostfringe/optics.hpp"
#include "ghostfringe/qgrid.hpp"

namespace ghostfringe {

namespace detail {

// ∫_T^∞ cos(K t + ψ) / t dt for T > 0.
inline double cos_over_t_tail(double K, double psi, double T) {
  if (K < 0.0) {
    K = -K;
    psi = -psi;
  }
  const double x = K * T;
  const double ci = gsl_sf_Ci(x);
  const double si = gsl_sf_Si(x);
  return -std::cos(psi) * ci - std::sin(psi) * (0.5 * std::numbers::pi - si);
}

// ∫_T^∞ cos(K t + ψ) / t² dt for T > 0, K != 0.
inline double cos_over_t2_tail(double K, double psi, double T) {
  return std::cos(K * T + psi) / T - K * cos_over_t_tail(K, psi - 0.5 * std::numbers::pi, T);
}

}  // namespace detail

/// Overlap integrals ∫ T̃(a - q) T̃(c - q) w(q) dq of the double-slit transform.
///
/// The weight is sampled on a QGrid and integrated with composite Simpson.
/// Beyond ±q_max the weight is taken as a constant tail level; that part is
/// integrated in closed form from T̃(p) = (2/√(2π)) Σ± sin(κ± p)/p with
/// κ± = (b ± d)/2, which reduces each term to sine and cosine integrals.
class OverlapIntegrator {
 public:
  OverlapIntegrator(SlitGeometry geom, QGrid grid) : geom_(geom), grid_(std::move(grid)) {
    kappa_ = {0.5 * (geom_.width() + geom_.separation()), 0.5 * (geom_.width() - geom_.separation())};
  }

  const SlitGeometry& geometry() const { return geom_; }
  const QGrid& grid() const { return grid_; }

  /// Samples T̃(a - q_j) on every grid node.
  std::vector<double> shifted_profile(double a) const {
    std::vector<double> out(grid_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = slit_fourier(a - grid_[j], geom_);
    return out;
  }

  /// ∫_{|q| > q_max} T̃(a - q) T̃(c - q) dq, exact.
  double tail(double a, double c) const { return right_tail(a, c) + right_tail(-a, -c); }

  template <typename W>
  W overlap(std::span<const double> profile_a, double a, std::span<const double> profile_c, double c,
            std::span<const W> weight, W tail_level) const {
    const std::size_t n = grid_.size();
    if (profile_a.size() != n || profile_c.size() != n || weight.size() != n)
      throw ConfigError("overlap operands do not match the grid");
    W odd{}, even{};
    for (std::size_t j = 1; j + 1 < n; j += 2) odd += profile_a[j] * profile_c[j] * weight[j];
    for (std::size_t j = 2; j + 1 < n; j += 2) even += profile_a[j] * profile_c[j] * weight[j];
    const W ends = profile_a[0] * profile_c[0] * weight[0] +
                   profile_a[n - 1] * profile_c[n - 1] * weight[n - 1];
    W sum = (ends + 4.0 * odd + 2.0 * even) * (grid_.spacing() / 3.0);
    if (tail_level != W{}) sum += tail_level * tail(a, c);
    return sum;
  }

  /// Convenience form that samples the profiles itself.
  template <typename W>
  W overlap(double a, double c, std::span<const W> weight, W tail_level) const {
    const auto pa = shifted_profile(a);
    const auto pc = shifted_profile(c);
    return overlap<W>(pa, a, pc, c, weight, tail_level);
  }

  /// ∫ T̃²(q) dq over the whole line (grid plus tails). Equals 2b exactly.
  double parseval_integral() const {
    const std::vector<double> ones(grid_.size(), 1.0);
    return overlap<double>(0.0, 0.0, ones, 1.0);
  }

  double parseval_error() const {
    const double exact = 2.0 * geom_.width();
    return std::abs(parseval_integral() - exact) / exact;
  }

  /// Throws NumericalError unless the Parseval identity holds to `tolerance`.
  void require_parseval(double tolerance = 1e-6) const {
    const double err = parseval_error();
    if (!(err <= tolerance))
      throw NumericalError("quadrature grid failed the Parseval self-test: relative error " +
                           std::to_string(err) + " > " + std::to_string(tolerance));
  }

  /// ∫ T̃(u) T̃(u + delta) du. Should equal √(2π) T̃(delta).
  double autocorrelation(double delta) const {
    const std::vector<double> ones(grid_.size(), 1.0);
    return overlap<double>(0.0, -delta, ones, 1.0);
  }

 private:
  // ∫_Q^∞ T̃(a - q) T̃(c - q) dq.
  double right_tail(double a, double c) const {
    const double Q = grid_.q_max();
    if (std::abs(a) > 0.5 * Q || std::abs(c) > 0.5 * Q)
      throw NumericalError("detector frequency lies outside the quadrature grid coverage");
    double sum = 0.0;
    for (double ka : kappa_) {
      for (double kc : kappa_) {
        // sin(ka(q-a)) sin(kc(q-c)) = [cos((ka-kc)q - ka a + kc c) - cos((ka+kc)q - ka a - kc c)] / 2
        sum += pole_tail(ka - kc, -ka * a + kc * c, a, c, Q);
        sum -= pole_tail(ka + kc, -ka * a - kc * c, a, c, Q);
      }
    }
    return sum / std::numbers::pi;  // (2/√(2π))² / 2
  }

  // ∫_Q^∞ cos(K q + φ) / ((q - a)(q - c)) dq.
  static double pole_tail(double K, double phi, double a, double c, double Q) {
    const double gap = a - c;
    if (K == 0.0) {
      const double x = gap / (Q - a);
      const double log_ratio = (x == 0.0) ? 1.0 : std::log1p(x) / x;
      return std::cos(phi) * log_ratio / (Q - a);
    }
    if (std::abs(gap) >= 1e-5 * Q) {
      const double ga = detail::cos_over_t_tail(K, phi + K * a, Q - a);
      const double gc = detail::cos_over_t_tail(K, phi + K * c, Q - c);
      return (ga - gc) / gap;
    }
    // Nearly coincident poles: 1/((q-a)(q-c)) = 1/(q-m)² + O(gap²/(q-m)⁴).
    const double m = 0.5 * (a + c);
    return detail::cos_over_t2_tail(K, phi + K * m, Q - m);
  }

  SlitGeometry geom_;
  QGrid grid_;
  std::array<double, 2> kappa_{};
};

}  // namespace ghostfringe
