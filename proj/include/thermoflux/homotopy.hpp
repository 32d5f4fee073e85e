#ifndef THERMOFLUX_HOMOTOPY_HPP
#define THERMOFLUX_HOMOTOPY_HPP

// One-parameter family X_t of oscillator ensembles joining X (t = 0) to its
// dual X' (t = pi/2). (a_t, beta_t) are fixed by
//   eps_t = eps cos t + eps' sin t,   v_t = v cos^2 t + v' sin^2 t,
// with v = Var(delta eps). Inverting eps_t = a_t/(e^{x_t} - 1) and
// N v_t = e^{x_t} eps_t^2 gives, with r = N v_t / eps_t^2,
//   beta_t a_t = log r,   a_t = eps_t (r - 1).
// Only the product N v_t enters.

#include <cmath>
#include <string>

#include "thermoflux/cumulant_algebra.hpp"
#include "thermoflux/duality.hpp"
#include "thermoflux/errors.hpp"

namespace thermoflux {

struct PathPoint {
  double t = 0.0;
  double a = 0.0;
  double beta = 0.0;
  double eps = 0.0;       // mean specific energy eps_t
  double variance = 0.0;  // v_t
  /// beta_t a_t < 0: formal evaluation (possible with the symmetric dual).
  bool formal = false;
};

class HomotopyPath {
public:
  HomotopyPath(double eps, double variance, double eps_dual, double variance_dual, double n)
      : eps_(eps), v_(variance), eps_d_(eps_dual), v_d_(variance_dual), n_(n) {
    if (!(n > 0.0)) throw DomainError("homotopy requires N > 0");
    if (!(variance > 0.0) || !(variance_dual > 0.0))
      throw DomainError("homotopy endpoint variances must be positive");
  }

  /// Path from X to its dual, using the given duality closure.
  static HomotopyPath from_dual(const DualPair& pair) {
    const auto src = specific_mean_variance(pair.source);
    const auto dst = specific_mean_variance(pair.dual);
    HomotopyPath path(src[0], src[1], dst[0], dst[1], pair.source.n);
    path.dual_formal_ = pair.unphysical_spectrum;
    return path;
  }

  static HomotopyPath from_system(double a, double beta, double n,
                                  DualVariant variant = DualVariant::remark1) {
    return from_dual(solve_dual(a, beta, n, variant));
  }

  double eps() const noexcept { return eps_; }
  double variance() const noexcept { return v_; }
  double eps_dual() const noexcept { return eps_d_; }
  double variance_dual() const noexcept { return v_d_; }
  double n() const noexcept { return n_; }
  bool dual_formal() const noexcept { return dual_formal_; }

  double eps_at(double t) const { return eps_ * std::cos(t) + eps_d_ * std::sin(t); }
  double variance_at(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    return v_ * c * c + v_d_ * s * s;
  }

  /// Same path with N scaled by c and both variances by 1/c.
  HomotopyPath rescaled(double c) const {
    HomotopyPath p(eps_, v_ / c, eps_d_, v_d_ / c, n_ * c);
    p.dual_formal_ = dual_formal_;
    return p;
  }

private:
  double eps_, v_, eps_d_, v_d_, n_;
  bool dual_formal_ = false;
};

inline PathPoint path_params(const HomotopyPath& path, double t) {
  const double eps = path.eps_at(t);
  const double v = path.variance_at(t);
  if (!(eps > 0.0))
    throw DegeneratePoint("homotopy mean energy eps_t = " + std::to_string(eps) +
                          " is not positive at t = " + std::to_string(t));
  const double nv = path.n() * v;
  const double excess = (nv - eps * eps) / (eps * eps);  // r - 1
  if (!(std::abs(excess) > 1e-14))
    throw DegeneratePoint("homotopy point with N v_t = eps_t^2 (a_t = 0) at t = " + std::to_string(t));
  const double x = std::log1p(excess);
  const double a = eps * excess;
  return {t, a, x / a, eps, v, x < 0.0};
}

/// Cumulants of delta eps_t at (a_t, beta_t, N); kappa_1 = 0, kappa_2 = v_t.
inline CumulantVector path_cumulants(const HomotopyPath& path, double t, int n0) {
  if (n0 < 2 || n0 > 8) throw DomainError("truncation degree must be in [2, 8]");
  const auto p = path_params(path, t);
  return fluctuation_cumulants(p.beta, p.a, path.n(), n0, Evaluation::formal);
}

}  // namespace thermoflux

#endif  // THERMOFLUX_HOMOTOPY_HPP
