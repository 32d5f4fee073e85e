#ifndef THERMOFLUX_DUALITY_HPP
#define THERMOFLUX_DUALITY_HPP

// Quasithermodynamic duality for the oscillator ensemble: given (a, beta, N)
// find (a', beta', N' = N) whose specific-energy variance satisfies
// Var(delta eps) Var(delta eps') = 1/N^2.
//
// Two closures of the underdetermined system are supported:
//   symmetric : eps_bar * eps_bar' = beta' beta. Reduces to
//               varphi(beta' a') = 1 / varphi(beta a), varphi(z) = z/(1 - e^{-z}),
//               so beta' a' < 0 whenever beta a > 0 and a' is negative.
//   remark1   : eps_bar' = beta. Closed form
//               beta' a' = 2 log(sinh(beta a / 2) / (beta a / 2)) > 0.

#include <array>
#include <cmath>
#include <string>

#include "thermoflux/core_thermo.hpp"
#include "thermoflux/errors.hpp"

namespace thermoflux {

/// varphi(z) = z / (1 - e^{-z}); varphi(0) = 1, strictly increasing.
inline double varphi(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 12.0;
  return z / -std::expm1(-z);
}

inline double varphi_derivative(double z) {
  if (std::abs(z) < 1e-5) return 0.5 + z / 6.0;
  const double w = -std::expm1(-z);  // 1 - e^{-z}
  return (w - z * (1.0 - w)) / (w * w);
}

enum class DualVariant { symmetric, remark1 };

inline const char* to_string(DualVariant v) {
  return v == DualVariant::symmetric ? "symmetric" : "remark1";
}

struct OscillatorSystem {
  double a = 1.0;
  double beta = 1.0;
  double n = 1.0;
};

struct DualPair {
  OscillatorSystem source;
  OscillatorSystem dual;
  DualVariant variant = DualVariant::symmetric;
  std::array<double, 2> residuals{};  // defining system, absolute
  /// a' < 0: the dual spectrum is formal (only the symmetric variant).
  bool unphysical_spectrum = false;
  bool sign_law_holds = false;
};

namespace detail {

inline void check_dual_inputs(double a, double beta, double n) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("duality requires a > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("duality requires beta > 0");
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("duality requires N > 0");
}

/// Solves varphi(y) = target for target in (0, 1]: expanding bracket,
/// bisection to 1e-8, Newton polish to |dy| < 1e-13.
inline double solve_varphi(double target) {
  if (!(target > 0.0) || target > 1.0)
    throw NoBracket("varphi target outside (0, 1]: " + std::to_string(target));
  if (target == 1.0) return 0.0;
  double hi = 0.0;
  double lo = -1.0;
  for (int i = 0; varphi(lo) > target; ++i) {
    if (i > 60) throw NoBracket("could not bracket varphi(y) = " + std::to_string(target));
    hi = lo;
    lo *= 2.0;
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (varphi(mid) > target ? hi : lo) = mid;
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double dy = (varphi(y) - target) / varphi_derivative(y);
    y -= dy;
    if (std::abs(dy) < 1e-13) break;
  }
  if (!(y >= lo - 1e-8 && y <= hi + 1e-8)) throw NoBracket("Newton polish left the bracket");
  return y;
}

/// log(sinh(u)/u) without cancellation for small u or overflow for large u.
inline double log_sinhc(double u) {
  u = std::abs(u);
  if (u < 0.5) {
    // sinh(u)/u - 1 = sum_{k>=1} u^{2k} / (2k+1)!
    const double u2 = u * u;
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 12; ++k) {
      term *= u2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
    }
    return std::log1p(sum);
  }
  if (u > 20.0) return u + std::log1p(-std::exp(-2.0 * u)) - std::log(2.0 * u);
  return std::log(std::sinh(u) / u);
}

}  // namespace detail

inline DualPair solve_symmetric(double a, double beta, double n) {
  detail::check_dual_inputs(a, beta, n);
  const double x = beta * a;
  const double y = detail::solve_varphi(1.0 / varphi(x));
  const double beta_d = std::exp(-0.5 * x - 0.5 * y) / beta;
  const double a_d = y / beta_d;

  DualPair p;
  p.source = {a, beta, n};
  p.dual = {a_d, beta_d, n};
  p.variant = DualVariant::symmetric;
  const double eps = a / std::expm1(x);
  // y == 0 only in the beta a -> 0 limit, where a'/(e^{y}-1) -> 1/beta'.
  const double eps_d = (y == 0.0) ? 1.0 / beta_d : a_d / std::expm1(y);
  p.residuals[0] = std::abs(eps * eps_d - beta_d * beta);
  p.residuals[1] = std::abs(std::expm1(2.0 * std::log(beta_d * beta) + x + y));
  p.unphysical_spectrum = a_d < 0.0;
  p.sign_law_holds = (x > 0.0) ? (y < 0.0 && beta_d > 0.0 && a_d < 0.0) : true;
  return p;
}

inline DualPair solve_remark1(double a, double beta, double n) {
  detail::check_dual_inputs(a, beta, n);
  const double x = beta * a;
  const double y = 2.0 * detail::log_sinhc(0.5 * x);
  const double a_d = beta * std::expm1(y);
  const double beta_d = (y == 0.0) ? 1.0 / beta : y / a_d;

  DualPair p;
  p.source = {a, beta, n};
  p.dual = {a_d, beta_d, n};
  p.variant = DualVariant::remark1;
  const double eps_d = (y == 0.0) ? 1.0 / beta_d : a_d / std::expm1(y);
  p.residuals[0] = std::abs(eps_d - beta);
  // exp(x + y) (x / (e^x - 1))^2 - 1
  p.residuals[1] = std::abs(std::expm1(x + y + 2.0 * std::log(x / std::expm1(x))));
  p.unphysical_spectrum = a_d < 0.0;
  p.sign_law_holds = y > 0.0 && a_d > 0.0 && beta_d > 0.0;
  return p;
}

inline DualPair solve_dual(double a, double beta, double n, DualVariant variant) {
  return variant == DualVariant::symmetric ? solve_symmetric(a, beta, n) : solve_remark1(a, beta, n);
}

struct DualityReport {
  std::array<double, 2> equation_residuals{};
  double variance_eps = 0.0;       // Var(delta eps) of the source
  double variance_eps_dual = 0.0;  // Var(delta eps') of the dual
  /// Var(delta eps) Var(delta eps') N^2; the target is 1 (k_B = 1).
  double scaled_variance_product = 0.0;
  /// symmetric: eps_bar eps_bar' - beta' beta; remark1: eps_bar' - beta.
  double imposed_condition_residual = 0.0;
  double mean_eps = 0.0;
  double mean_eps_dual = 0.0;
};

/// Specific-energy mean and Var(delta eps) = Var(E)/N^2, formally extended to
/// beta*a < 0.
inline std::array<double, 2> specific_mean_variance(const OscillatorSystem& s) {
  const double x = s.beta * s.a;
  if (x == 0.0) return {1.0 / s.beta, 1.0 / (s.beta * s.beta * s.n)};
  const auto st = energy_stats(s.beta, s.a, 1.0, Evaluation::formal);
  return {st.mean, st.variance / s.n};
}

inline DualityReport verify_duality(const DualPair& pair) {
  DualityReport r;
  r.equation_residuals = pair.residuals;
  const auto src = specific_mean_variance(pair.source);
  const auto dst = specific_mean_variance(pair.dual);
  r.mean_eps = src[0];
  r.mean_eps_dual = dst[0];
  r.variance_eps = src[1];
  r.variance_eps_dual = dst[1];
  r.scaled_variance_product = src[1] * dst[1] * pair.source.n * pair.source.n;
  r.imposed_condition_residual = pair.variant == DualVariant::symmetric
                                     ? src[0] * dst[0] - pair.dual.beta * pair.source.beta
                                     : dst[0] - pair.source.beta;
  return r;
}

}  // namespace thermoflux

#endif  // THERMOFLUX_DUALITY_HPP
