#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "ghostfringe/error.hpp"
#include "ghostfringe/qgrid.hpp"

namespace ghostfringe {

/// Discretized two-photon amplitude C[i, j] = C(q_i, q_j) on one frequency line.
/// Normalized states satisfy Σ |C[i,j]|² Δq² = 1.
class TwoPhotonAmplitude {
 public:
  TwoPhotonAmplitude(QGrid grid, Eigen::MatrixXcd amplitude) : grid_(std::move(grid)), c_(std::move(amplitude)) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (c_.rows() != n || c_.cols() != n) throw ConfigError("amplitude matrix must be N x N over the grid");
  }

  /// C[i, j] = δ_{j, N-1-i} / (√N Δq): perfect transverse-momentum anticorrelation.
  static TwoPhotonAmplitude entangled(const QGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    const double value = 1.0 / (std::sqrt(static_cast<double>(n)) * grid.spacing());
    for (Eigen::Index i = 0; i < n; ++i) c(i, n - 1 - i) = value;
    return TwoPhotonAmplitude(grid, std::move(c));
  }

  /// C = c1 ⊗ c2 (each factor normalized so Σ|c|² Δq = 1).
  static TwoPhotonAmplitude product(const QGrid& grid, const Eigen::VectorXcd& c1, const Eigen::VectorXcd& c2) {
    return TwoPhotonAmplitude(grid, c1 * c2.transpose());
  }

  const QGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& matrix() const { return c_; }
  std::complex<double> operator()(Eigen::Index i, Eigen::Index j) const { return c_(i, j); }

  double norm() const { return c_.squaredNorm() * grid_.spacing() * grid_.spacing(); }

  TwoPhotonAmplitude normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw ConfigError("cannot normalize a zero amplitude");
    return TwoPhotonAmplitude(grid_, c_ / std::sqrt(n));
  }

 private:
  QGrid grid_;
  Eigen::MatrixXcd c_;
};

enum class Beam { One, Two };

/// ⟨a†_b(q) a_b(q')⟩ of one beam: the other beam's wavevector is traced out.
inline Eigen::MatrixXcd first_order_from_state(const TwoPhotonAmplitude& state, Beam beam) {
  const double dq = state.grid().spacing();
  const auto& c = state.matrix();
  if (beam == Beam::One) return (c.conjugate() * c.transpose()) * dq;
  return (c.adjoint() * c) * dq;
}

/// Rank-one fourth-order kernel C*(q1, q2) C(q'1, q'2) of a pure two-photon state.
class StateKernel {
 public:
  explicit StateKernel(TwoPhotonAmplitude state) : state_(std::move(state)) {}

  std::complex<double> operator()(Eigen::Index i1, Eigen::Index i2, Eigen::Index k1, Eigen::Index k2) const {
    return std::conj(state_(i1, i2)) * state_(k1, k2);
  }

  const TwoPhotonAmplitude& state() const { return state_; }

 private:
  TwoPhotonAmplitude state_;
};

inline StateKernel second_order_from_state(const TwoPhotonAmplitude& state) { return StateKernel(state); }

}  // namespace ghostfringe
