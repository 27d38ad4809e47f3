#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ghostfringe/error.hpp"
#include "ghostfringe/qgrid.hpp"
#include "ghostfringe/spectrum.hpp"

namespace ghostfringe {

using complex = std::complex<double>;

/// Delta-pairing structure of one term of ⟨E*(q1) E*(q2) E(q'2) E(q'1)⟩.
enum class Pairing {
  DegenerateDirect,    // δ(q1 - q'1) δ(q2 - q'2)
  DegenerateExchange,  // δ(q1 - q'2) δ(q2 - q'1)
  Conserving,          // δ(q1 + q2) δ(q'1 + q'2)
};

inline std::string to_string(Pairing p) {
  switch (p) {
    case Pairing::DegenerateDirect: return "degenerate-direct";
    case Pairing::DegenerateExchange: return "degenerate-exchange";
    case Pairing::Conserving: return "conserving";
  }
  return "unknown";
}

/// Single-mode density s(q) >= 0 of a degenerate term; the term weight is s(q1) s(q2).
/// `tail` is the constant value of s outside any finite grid. A delta density
/// stands for s(q) = δ(q) and has no pointwise value.
struct ModeDensity {
  std::function<double(double)> value;
  double tail = 0.0;
  bool delta = false;
};

/// Pair amplitude c(q) of a conserving term; the term weight is c*(q1) c(q'1)
/// on the support q2 = -q1, q'2 = -q'1.
struct PairAmplitude {
  std::function<complex(double)> value;
  complex tail{0.0, 0.0};
};

struct PairingTerm {
  Pairing pairing;
  std::variant<ModeDensity, PairAmplitude> weight;

  const ModeDensity& density() const { return std::get<ModeDensity>(weight); }
  const PairAmplitude& amplitude() const { return std::get<PairAmplitude>(weight); }
  bool is_degenerate() const { return pairing != Pairing::Conserving; }
};

/// Fourth-order field correlation as a sum of weighted delta pairings.
/// Deltas are kept symbolic; consumers collapse them analytically.
class FourthOrderKernel {
 public:
  FourthOrderKernel() = default;
  explicit FourthOrderKernel(std::vector<PairingTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<PairingTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  std::size_t count(Pairing p) const {
    std::size_t n = 0;
    for (const auto& t : terms_) n += (t.pairing == p);
    return n;
  }

  /// Copy with every term of the given pairing removed (term ablation).
  FourthOrderKernel without(Pairing p) const {
    std::vector<PairingTerm> kept;
    for (const auto& t : terms_)
      if (t.pairing != p) kept.push_back(t);
    return FourthOrderKernel(std::move(kept));
  }

  /// Fourth moment of cell amplitudes a_j = E(q_j) Δq:
  /// ⟨a*_{j1} a*_{j2} a_{k2} a_{k1}⟩, with each δ(q - q') -> δ_jk / Δq.
  complex discrete_moment(const QGrid& grid, std::size_t j1, std::size_t j2, std::size_t k1,
                          std::size_t k2) const {
    const double dq = grid.spacing();
    complex sum{};
    for (const auto& t : terms_) {
      switch (t.pairing) {
        case Pairing::DegenerateDirect:
          if (j1 == k1 && j2 == k2) sum += cell_density(t.density(), grid, j1) * cell_density(t.density(), grid, j2);
          break;
        case Pairing::DegenerateExchange:
          if (j1 == k2 && j2 == k1) sum += cell_density(t.density(), grid, j1) * cell_density(t.density(), grid, j2);
          break;
        case Pairing::Conserving:
          if (j2 == grid.mirror(j1) && k2 == grid.mirror(k1)) {
            const auto& c = t.amplitude().value;
            sum += std::conj(c(grid[j1])) * c(grid[k1]) * dq * dq;
          }
          break;
      }
    }
    return sum;
  }

 private:
  // s(q_j) Δq, or the unit mass at the center node for a delta density.
  static double cell_density(const ModeDensity& d, const QGrid& grid, std::size_t j) {
    if (d.delta) return j == grid.center() ? 1.0 : 0.0;
    return d.value(grid[j]) * grid.spacing();
  }

  std::vector<PairingTerm> terms_;
};

/// Density term built from a source spectrum (delta spectra stay symbolic).
inline ModeDensity density_from_spectrum(const SpatialSpectrum& spectrum) {
  if (spectrum.is_delta()) return ModeDensity{{}, 0.0, true};
  return ModeDensity{[spectrum](double q) { return spectrum.value(q); }, 0.0, false};
}

/// Ideal two-photon entangled state: a single conserving term of unit weight.
inline FourthOrderKernel entangled_kernel() {
  PairAmplitude unit{[](double) { return complex{1.0, 0.0}; }, complex{1.0, 0.0}};
  return FourthOrderKernel({PairingTerm{Pairing::Conserving, unit}});
}

/// Thermal light: Gaussian moment factorization into direct and exchange
/// pairings, each weighted by S(q1) S(q2).
inline FourthOrderKernel thermal_kernel(const SpatialSpectrum& spectrum) {
  const ModeDensity s = density_from_spectrum(spectrum);
  return FourthOrderKernel({PairingTerm{Pairing::DegenerateDirect, s},
                            PairingTerm{Pairing::DegenerateExchange, s}});
}

/// Bogoliubov gain functions U(q), V(q) of a down-converter, frequency collapsed.
class GainProfile {
 public:
  using Function = std::function<complex(double)>;

  /// U = cosh(r g), V = sinh(r g) with g(q) = exp(-q²/2σ²).
  static GainProfile gaussian(double r, double sigma) {
    if (!std::isfinite(r) || r < 0.0) throw ConfigError("gain r must be finite and nonnegative");
    if (!(sigma > 0.0)) throw ConfigError("gain bandwidth sigma must be positive");
    if (std::isinf(sigma)) return flat(r);
    auto g = [sigma](double q) { return std::exp(-0.5 * (q / sigma) * (q / sigma)); };
    return GainProfile([r, g](double q) { return complex{std::cosh(r * g(q)), 0.0}; },
                       [r, g](double q) { return complex{std::sinh(r * g(q)), 0.0}; },
                       complex{1.0, 0.0}, complex{0.0, 0.0}, 8.0 * sigma);
  }

  /// q-independent gain (infinitely broad phase matching).
  static GainProfile flat(double r) {
    if (!std::isfinite(r) || r < 0.0) throw ConfigError("gain r must be finite and nonnegative");
    const complex u{std::cosh(r), 0.0};
    const complex v{std::sinh(r), 0.0};
    return GainProfile([u](double) { return u; }, [v](double) { return v; }, u, v, 0.0);
  }

  /// Arbitrary profile; `u_tail`/`v_tail` are the values for |q| -> ∞ and
  /// `extent` the half-width over which the profile varies.
  static GainProfile custom(Function u, Function v, complex u_tail, complex v_tail, double extent) {
    return GainProfile(std::move(u), std::move(v), u_tail, v_tail, extent);
  }

  complex U(double q) const { return u_(q); }
  complex V(double q) const { return v_(q); }
  complex u_tail() const { return u_tail_; }
  complex v_tail() const { return v_tail_; }
  double extent() const { return extent_; }

  /// Largest violation of |U|² - |V|² = 1 over the grid nodes and the tails.
  double bogoliubov_violation(const QGrid& grid) const {
    double worst = std::abs(std::norm(u_tail_) - std::norm(v_tail_) - 1.0);
    for (double q : grid.points()) worst = std::max(worst, std::abs(std::norm(U(q)) - std::norm(V(q)) - 1.0));
    return worst;
  }

  /// Grid used to probe the unitarity invariant when no grid is supplied.
  QGrid probe_grid() const { return QGrid(extent_ > 0.0 ? extent_ : 1.0, 1025); }

 private:
  GainProfile(Function u, Function v, complex u_tail, complex v_tail, double extent)
      : u_(std::move(u)), v_(std::move(v)), u_tail_(u_tail), v_tail_(v_tail), extent_(extent) {}

  Function u_;
  Function v_;
  complex u_tail_;
  complex v_tail_;
  double extent_;
};

enum class Crystal { TypeI, TypeII, SingleBeam };

inline std::string to_string(Crystal c) {
  switch (c) {
    case Crystal::TypeI: return "type-I";
    case Crystal::TypeII: return "type-II";
    case Crystal::SingleBeam: return "single-beam";
  }
  return "unknown";
}

/// Effective power spectrum |V(q)|² of the down-converted beam.
inline double spdc_first_order(const GainProfile& g, double q) { return std::norm(g.V(q)); }

/// Fourth-order kernel of down-converted light.
///
/// Type I: conserving term with pair amplitude V(q)U(-q) plus the thermal
/// direct and exchange terms weighted by |V(q1)V(q2)|². Type II, cross
/// polarized: the exchange term is absent. Single beam (signal or idler
/// behind a polarizing splitter): the thermal terms only. Both beams share
/// one gain profile.
inline FourthOrderKernel spdc_kernel(const GainProfile& g, Crystal crystal, const QGrid& probe) {
  constexpr double tol = 1e-9;
  const double violation = g.bogoliubov_violation(probe);
  if (!(violation <= tol))
    throw ConfigError("gain profile violates |U|^2 - |V|^2 = 1 (deviation " + std::to_string(violation) + ")");

  const ModeDensity thermal{[g](double q) { return std::norm(g.V(q)); }, std::norm(g.v_tail()), false};
  const PairAmplitude pair{[g](double q) { return g.V(q) * g.U(-q); }, g.v_tail() * g.u_tail()};

  std::vector<PairingTerm> terms;
  if (crystal != Crystal::SingleBeam) terms.push_back({Pairing::Conserving, pair});
  terms.push_back({Pairing::DegenerateDirect, thermal});
  if (crystal != Crystal::TypeII) terms.push_back({Pairing::DegenerateExchange, thermal});
  return FourthOrderKernel(std::move(terms));
}

inline FourthOrderKernel spdc_kernel(const GainProfile& g, Crystal crystal) {
  return spdc_kernel(g, crystal, g.probe_grid());
}

}  // namespace ghostfringe
