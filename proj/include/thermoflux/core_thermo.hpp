#ifndef THERMOFLUX_CORE_THERMO_HPP
#define THERMOFLUX_CORE_THERMO_HPP

// Canonical thermodynamics of N identical quantum harmonic oscillators with
// level spacing a (ground level shifted to zero), in units with k_B = 1.
//
// Stable forms used throughout, with x = beta*a and q = exp(-x):
//   log Z_1      = -log1p(-q)
//   <E>/N        =  a / expm1(x)
//   Var(E)/N     =  a^2 q / expm1(-x)^2      (x > 0)
//                =  a^2 e^x / expm1(x)^2     (x < 0, formal evaluation only)
// None of these overflow for large x; q simply underflows to zero.

#include <cmath>
#include <numbers>
#include <string>

#include "thermoflux/errors.hpp"

namespace thermoflux {

/// Boltzmann constant in erg/K, used only for cgs rescaling of outputs.
inline constexpr double kBoltzmannCgs = 1.3806488e-16;

/// Strict evaluation rejects beta*a <= 0. Formal evaluation extends the
/// closed forms to beta*a < 0 (dual systems with a negative level spacing).
enum class Evaluation { strict, formal };

/// N oscillators with level spacing a = hbar*omega.
class OscillatorEnsemble {
public:
  OscillatorEnsemble(double a, double n) : a_(a), n_(n) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw DomainError("oscillator spacing a must be positive and finite, got " +
                        std::to_string(a));
    if (!(n > 0.0) || !std::isfinite(n))
      throw DomainError("particle count N must be positive, got " + std::to_string(n));
  }

  /// Ensemble with possibly negative spacing; produced by the symmetric dual.
  static OscillatorEnsemble formal(double a, double n) {
    if (a == 0.0 || !std::isfinite(a))
      throw DomainError("oscillator spacing a must be nonzero and finite");
    if (!(n > 0.0) || !std::isfinite(n))
      throw DomainError("particle count N must be positive, got " + std::to_string(n));
    OscillatorEnsemble e;
    e.a_ = a;
    e.n_ = n;
    return e;
  }

  double a() const noexcept { return a_; }
  double n() const noexcept { return n_; }
  bool unphysical_spectrum() const noexcept { return a_ < 0.0; }

private:
  OscillatorEnsemble() = default;
  double a_ = 1.0;
  double n_ = 1.0;
};

enum class BetaSource { thermostat, derived };

struct ThermoState {
  double beta = 1.0;
  BetaSource source = BetaSource::thermostat;
};

namespace detail {

inline double checked_beta_a(double beta, double a, Evaluation mode) {
  const double x = beta * a;
  if (std::isnan(x) || x == 0.0 || x == -INFINITY) throw DivergentPartition(x);
  if (mode == Evaluation::strict && x < 0.0) throw DivergentPartition(x);
  return x;
}

/// 1/(e^x - 1), the mean occupation of a single oscillator.
inline double occupation(double x) { return 1.0 / std::expm1(x); }

/// Var(E)/(N a^2) for a single oscillator.
inline double occupation_variance(double x) {
  if (x > 0.0) {
    const double em = std::expm1(-x);
    return std::exp(-x) / (em * em);
  }
  const double em = std::expm1(x);
  return std::exp(x) / (em * em);
}

}  // namespace detail

/// N log Z_1 = -N log(1 - e^{-beta a}).
inline double log_partition(const ThermoState& state, const OscillatorEnsemble& ens) {
  const double x = detail::checked_beta_a(state.beta, ens.a(), Evaluation::strict);
  return -ens.n() * std::log1p(-std::exp(-x));
}

struct EnergyStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the total energy: <E> = N a/(e^{beta a}-1),
/// Var(E) = e^{beta a} <E>^2 / N.
inline EnergyStats energy_stats(double beta, double a, double n,
                                Evaluation mode = Evaluation::strict) {
  const double x = detail::checked_beta_a(beta, a, mode);
  return {n * a * detail::occupation(x), n * a * a * detail::occupation_variance(x)};
}

inline EnergyStats energy_stats(const ThermoState& state, const OscillatorEnsemble& ens) {
  return energy_stats(state.beta, ens.a(), ens.n(), Evaluation::strict);
}

struct SpecificEntropy {
  double s = 0.0;
  double ds = 0.0;   // s'(eps) = beta
  double d2s = 0.0;  // s''(eps) = -lambda
};

/// Specific entropy of the oscillator gas and its first two derivatives.
/// s = log1p(eps/a) + (eps/a) log1p(a/eps), which equals
/// -log(a/eps) + (1 + eps/a) log(1 + a/eps) without cancellation near eps -> 0.
inline SpecificEntropy specific_entropy(double eps, double a) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw DomainError("specific energy must be positive, got " + std::to_string(eps));
  if (!(a > 0.0)) throw DomainError("oscillator spacing a must be positive");
  const double r = eps / a;
  return {std::log1p(r) + r * std::log1p(1.0 / r), std::log1p(a / eps) / a,
          -1.0 / (eps * (eps + a))};
}

/// Statistical entropy S(N, E) = N s(E/N); first-degree homogeneous in (N, E).
inline double entropy_stat(const OscillatorEnsemble& ens, double total_energy) {
  if (!(total_energy > 0.0))
    throw DomainError("total energy must be positive, got " + std::to_string(total_energy));
  return ens.n() * specific_entropy(total_energy / ens.n(), ens.a()).s;
}

/// A point on the equilibrium curve beta = a^{-1} log(1 + a/eps).
class ManifoldPoint {
public:
  static ManifoldPoint from_energy(double eps, double a) {
    const auto s = specific_entropy(eps, a);
    return ManifoldPoint(eps, s.ds, -s.d2s);
  }

  static ManifoldPoint from_beta(double beta, double a) {
    const double x = detail::checked_beta_a(beta, a, Evaluation::strict);
    if (x == INFINITY) throw DomainError("beta*a is infinite: eps(beta) = 0 is not a state");
    const double eps = a * detail::occupation(x);
    if (!(eps > 0.0)) throw DomainError("eps(beta) underflows to zero; ground state only");
    return ManifoldPoint(eps, beta, 1.0 / (eps * (eps + a)));
  }

  double epsilon() const noexcept { return epsilon_; }
  double beta() const noexcept { return beta_; }
  /// lambda = -s''(eps) > 0.
  double lambda() const noexcept { return lambda_; }

private:
  ManifoldPoint(double eps, double beta, double lambda)
      : epsilon_(eps), beta_(beta), lambda_(lambda) {}
  double epsilon_;
  double beta_;
  double lambda_;
};

struct LegendrePhi {
  double phi = 0.0;
  double d2phi = 0.0;
  double epsilon = 0.0;  // stationary point eps(beta)
};

/// phi(beta) = -beta eps + s(eps) at the stationary eps(beta) = a/(e^{beta a}-1).
/// phi'' equals the single-oscillator energy variance eps(eps + a) = 1/lambda.
inline LegendrePhi legendre_phi(const ThermoState& state, double a) {
  const double x = detail::checked_beta_a(state.beta, a, Evaluation::strict);
  const double eps = a * detail::occupation(x);
  const double s = specific_entropy(eps, a).s;
  return {-state.beta * eps + s, a * a * detail::occupation_variance(x), eps};
}

/// Quasithermodynamic Gaussian fluctuations of (delta eps, delta beta).
class GaussianFluctuation {
public:
  GaussianFluctuation(double variance_eps, double variance_beta, double n)
      : variance_eps_(variance_eps), variance_beta_(variance_beta), n_(n) {}

  double variance_eps() const noexcept { return variance_eps_; }
  double variance_beta() const noexcept { return variance_beta_; }
  double n() const noexcept { return n_; }

  // Normalized densities; the prefactor is (N lambda / 2 pi)^{1/2}.
  double density_eps(double x) const { return normal_pdf(x, variance_eps_); }
  double density_beta(double y) const { return normal_pdf(y, variance_beta_); }

private:
  static double normal_pdf(double x, double var) {
    return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
  }
  double variance_eps_;
  double variance_beta_;
  double n_;
};

inline GaussianFluctuation quasi_fluctuations(const ManifoldPoint& alpha, double n) {
  if (!(n > 0.0)) throw DomainError("particle count N must be positive");
  return {1.0 / (n * alpha.lambda()), alpha.lambda() / n, n};
}

}  // namespace thermoflux

#endif  // THERMOFLUX_CORE_THERMO_HPP
