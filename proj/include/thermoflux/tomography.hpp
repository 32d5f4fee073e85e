#ifndef THERMOFLUX_TOMOGRAPHY_HPP
#define THERMOFLUX_TOMOGRAPHY_HPP

// Tomograms and the tomographic reconstruction of the joint quasiprobability
// R_N(x, y) of (delta eps, delta beta).
//
// A tomogram at angle t is the density of cos(t) delta eps + sin(t) delta beta.
// It is built as a truncated Gram-Charlier A series around the Gaussian of
// matching variance v,
//   T(z) = g(z; v) sum_{n=0}^{n0} gamma_n He_n(z / sqrt v),
//   gamma_n = E[He_n(Z / sqrt v)] / n!,
// which reproduces the first n0 raw moments exactly. Its characteristic
// function is exp(-v k^2 / 2) sum_n gamma_n (i k sqrt v)^n.
//
// Reconstruction (unit Lebesgue mass convention; the Wigner-normalized object
// is 2 pi h R):
//   R(x, y) = (1/4pi^2) int_0^pi dtheta int_R dr |r| chi_theta(-r) e^{i r (x cos + y sin)}.
// The r-integral uses a half-range Gauss rule for the weight u e^{-u^2}
// (r = u sqrt(2/v_theta)), which absorbs both the ramp |r| and the Gaussian
// envelope; the theta-integral is the periodic trapezoid rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "thermoflux/core_thermo.hpp"
#include "thermoflux/cumulant_algebra.hpp"
#include "thermoflux/errors.hpp"
#include "thermoflux/gibbs_sampler.hpp"
#include "thermoflux/homotopy.hpp"
#include "thermoflux/quadrature.hpp"

namespace thermoflux {

namespace detail {

/// Coefficients of the probabilists' Hermite polynomials He_0..He_nmax,
/// coeff[n][j] multiplies x^j.
inline std::vector<std::vector<double>> hermite_he_coefficients(int nmax) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(nmax + 1),
                                     std::vector<double>(static_cast<std::size_t>(nmax + 1), 0.0));
  c[0][0] = 1.0;
  if (nmax >= 1) c[1][1] = 1.0;
  for (int n = 1; n < nmax; ++n) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t j = 0; j <= un; ++j) c[un + 1][j + 1] += c[un][j];
    for (std::size_t j = 0; j + 1 <= un; ++j) c[un + 1][j] -= static_cast<double>(n) * c[un - 1][j];
  }
  return c;
}

inline double hermite_he(int n, double x) {
  double prev = 1.0, cur = x;
  if (n == 0) return 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace detail

class Tomogram {
public:
  /// Gram-Charlier density matched to the first n0 cumulants.
  Tomogram(const CumulantVector& cumulants, int n0, double angle = 0.0) : angle_(angle), n0_(n0) {
    if (n0 < 2 || n0 > 8) throw DomainError("truncation degree n0 must be in [2, 8]");
    if (cumulants.order() < n0)
      throw DomainError("tomogram needs " + std::to_string(n0) + " cumulants, got " +
                        std::to_string(cumulants.order()));
    cumulants_.assign(cumulants.values.begin(), cumulants.values.begin() + n0);
    variance_ = cumulants_[1];
    if (!(variance_ > 0.0) || !std::isfinite(variance_))
      throw IllConditioned("tomogram variance must be positive and finite");
    sigma_ = std::sqrt(variance_);
    raw_moments_ = detail::raw_from_cumulants(cumulants_);
    const auto he = detail::hermite_he_coefficients(n0);
    gamma_.assign(static_cast<std::size_t>(n0 + 1), 0.0);
    double factorial = 1.0;
    for (int n = 0; n <= n0; ++n) {
      if (n > 0) factorial *= n;
      double acc = 0.0;
      double sig_pow = 1.0;
      for (int j = 0; j <= n; ++j) {
        acc += he[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] *
               raw_moments_[static_cast<std::size_t>(j)] / sig_pow;
        sig_pow *= sigma_;
      }
      gamma_[static_cast<std::size_t>(n)] = acc / factorial;
    }
    if (!std::isfinite(gamma_.back())) throw IllConditioned("Gram-Charlier coefficients not finite");
  }

  double angle() const noexcept { return angle_; }
  int degree() const noexcept { return n0_; }
  double variance() const noexcept { return variance_; }
  const std::vector<double>& cumulants() const noexcept { return cumulants_; }
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  /// Target raw moments m_0..m_n0.
  const std::vector<double>& target_moments() const noexcept { return raw_moments_; }

  /// T(z; cos t, sin t).
  double density(double z) const {
    const double x = z / sigma_;
    double series = 0.0;
    for (int n = 0; n <= n0_; ++n) {
      const double g = gamma_[static_cast<std::size_t>(n)];
      if (g != 0.0) series += g * detail::hermite_he(n, x);
    }
    return series * std::exp(-0.5 * x * x) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
  }

  /// T(z; mu, nu) for (mu, nu) = lambda (cos t, sin t), lambda != 0:
  /// |lambda|^{-1} T(z / lambda; cos t, sin t).
  double density(double z, double mu, double nu) const {
    const double c = std::cos(angle_), s = std::sin(angle_);
    const double lambda = mu * c + nu * s;
    const double cross = mu * s - nu * c;
    if (lambda == 0.0 || std::abs(cross) > 1e-12 * std::hypot(mu, nu))
      throw DomainError("(mu, nu) is not a nonzero multiple of this tomogram's direction");
    return density(z / lambda) / std::abs(lambda);
  }

  /// Polynomial factor P(k) of chi(k) = exp(-v k^2/2) P(k).
  std::complex<double> characteristic_polynomial(double k) const {
    const std::complex<double> ik_sigma(0.0, k * sigma_);
    std::complex<double> acc = 0.0;
    for (int n = n0_; n >= 0; --n) acc = acc * ik_sigma + gamma_[static_cast<std::size_t>(n)];
    return acc;
  }

  std::complex<double> characteristic(double k) const {
    return std::exp(-0.5 * variance_ * k * k) * characteristic_polynomial(k);
  }

  /// int z^n T(z) dz for n = 0..nmax by Gauss-Hermite quadrature.
  std::vector<double> quadrature_moments(int nmax) const {
    const auto rule = gauss_hermite(static_cast<std::size_t>(std::max(32, n0_ + nmax + 2)));
    std::vector<double> m(static_cast<std::size_t>(nmax + 1), 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double x = std::numbers::sqrt2 * rule.nodes[i];
      double series = 0.0;
      for (int n = 0; n <= n0_; ++n) series += gamma_[static_cast<std::size_t>(n)] * detail::hermite_he(n, x);
      const double w = rule.weights[i] / std::sqrt(std::numbers::pi) * series;
      double zp = 1.0;
      const double z = sigma_ * x;
      for (int n = 0; n <= nmax; ++n) {
        m[static_cast<std::size_t>(n)] += w * zp;
        zp *= z;
      }
    }
    return m;
  }

  /// Fraction of |T| mass that is negative, on a +-10 sigma sweep.
  double negativity_fraction() const {
    double neg = 0.0, total = 0.0;
    constexpr int steps = 2001;
    for (int i = 0; i < steps; ++i) {
      const double z = sigma_ * (-10.0 + 20.0 * i / (steps - 1));
      const double d = density(z);
      total += std::abs(d);
      if (d < 0.0) neg -= d;
    }
    return total > 0.0 ? neg / total : 0.0;
  }

private:
  double angle_;
  int n0_;
  double variance_ = 0.0;
  double sigma_ = 0.0;
  std::vector<double> cumulants_;
  std::vector<double> raw_moments_;
  std::vector<double> gamma_;
};

inline Tomogram build_tomogram(const CumulantVector& cumulants, int n0, double angle = 0.0) {
  return Tomogram(cumulants, n0, angle);
}

/// Zero-mean Gaussian tomogram of the given variance.
inline Tomogram gaussian_tomogram(double variance, double angle, int n0 = 2) {
  CumulantVector k{CumulantKind::fluctuation, std::vector<double>(static_cast<std::size_t>(n0), 0.0)};
  k.values[1] = variance;
  return Tomogram(k, n0, angle);
}

inline double theta_at(int j, int n_theta) {
  return std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta);
}

/// Gaussian family v_t = v cos^2 t + v' sin^2 t on the uniform theta grid.
inline std::vector<Tomogram> gaussian_tomograms(double variance_x, double variance_y, int n_theta) {
  std::vector<Tomogram> out;
  out.reserve(static_cast<std::size_t>(n_theta));
  for (int j = 0; j < n_theta; ++j) {
    const double t = theta_at(j, n_theta);
    const double c = std::cos(t), s = std::sin(t);
    out.push_back(gaussian_tomogram(variance_x * c * c + variance_y * s * s, t));
  }
  return out;
}

namespace detail {

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, all derivatives vanish at both ends.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double f0 = std::exp(-1.0 / x);
  const double f1 = std::exp(-1.0 / (1.0 - x));
  return f0 / (f0 + f1);
}

}  // namespace detail

/// Cumulants of the tomogram at angle t in [0, pi) for a homotopy path.
///
/// On [0, pi/2] these are the cumulants of delta eps_t. The oscillator family
/// cannot be carried around the half-circle: eps_t vanishes at
/// t_+ = pi - atan(eps/eps') and the higher cumulants diverge there, while
/// consistency at t = pi demands kappa_n(pi) = (-1)^n kappa_n(0). The
/// remaining quadrant is therefore closed with a C-infinity partition of unity:
///   w1 * hom(t) + w2 * (-1)^n hom(t - pi) + (1 - w1 - w2) * ind(t),
/// where hom(t - pi) is the mirrored homotopy (its continuation through t = 0),
/// ind(t) = cos^n t kappa_n(0) + sin^n t kappa_n(pi/2) is the cumulant of
/// independent marginals, w1 steps from 1 to 0 on [pi/2, pi/2 + 0.8 (t_+ - pi/2)]
/// and w2 from 0 to 1 on [pi - 0.8 (pi - t_+), pi]. Every piece has
/// kappa_2 = v cos^2 t + v' sin^2 t, and the family is smooth and antipodally
/// consistent, which keeps the trapezoid rule in theta spectrally accurate.
inline CumulantVector tomogram_cumulants(const HomotopyPath& path, double t, int n0) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (t <= half_pi) return path_cumulants(path, t, n0);
  if (!(t < std::numbers::pi)) throw DomainError("tomogram angle must lie in [0, pi)");
  const double t_plus = std::numbers::pi - std::atan2(path.eps(), path.eps_dual());
  const double fwd_end = half_pi + 0.8 * (t_plus - half_pi);
  const double back_start = std::numbers::pi - 0.8 * (std::numbers::pi - t_plus);
  const double w1 = 1.0 - detail::smooth_step((t - half_pi) / (fwd_end - half_pi));
  const double w2 = detail::smooth_step((t - back_start) / (std::numbers::pi - back_start));

  const auto source = path_cumulants(path, 0.0, n0);
  const auto dual = path_cumulants(path, half_pi, n0);
  const double c = std::cos(t), s = std::sin(t);
  CumulantVector out{CumulantKind::fluctuation, std::vector<double>(static_cast<std::size_t>(n0), 0.0)};
  double c_pow = 1.0, s_pow = 1.0;
  for (int n = 1; n <= n0; ++n) {
    c_pow *= c;
    s_pow *= s;
    out.values[static_cast<std::size_t>(n - 1)] = (1.0 - w1 - w2) * (c_pow * source(n) + s_pow * dual(n));
  }
  if (w1 > 0.0) {
    const auto fwd = path_cumulants(path, t, n0);
    for (int n = 1; n <= n0; ++n) out.values[static_cast<std::size_t>(n - 1)] += w1 * fwd(n);
  }
  if (w2 > 0.0) {
    const auto back = path_cumulants(path, t - std::numbers::pi, n0);
    for (int n = 1; n <= n0; ++n)
      out.values[static_cast<std::size_t>(n - 1)] += w2 * ((n % 2 == 0) ? back(n) : -back(n));
  }
  return out;
}

/// Angle dependence of the tomogram cumulants.
///   consistent : each kappa_n(t) is the homogeneous form
///                sum_j b_{n,j} cos^{n-j} t sin^j t, with b_{n,0} = kappa_n(0) and
///                b_{n,n} = kappa_n(pi/2) pinned to the homotopy endpoints and the
///                mixed coefficients fitted to the homotopy on [0, pi/2] by least
///                squares. Homogeneous cumulants are exactly the cumulants of
///                cos t X + sin t Y for some joint law, so the family lies in the
///                range of the Radon transform and R decays like a Gaussian.
///   raw        : the homotopy itself on [0, pi/2], closed by tomogram_cumulants.
///                For n >= 3 the homotopy cumulants are not homogeneous forms; the
///                reconstructed R then has algebraic tails and its windowed
///                marginal moments depend on the grid extent.
enum class TomogramFamily { consistent, raw };

inline const char* to_string(TomogramFamily f) { return f == TomogramFamily::consistent ? "consistent" : "raw"; }

/// Homogeneous cumulant forms fitted to a homotopy path.
struct CumulantForms {
  int n0 = 2;
  /// coefficients[n - 1][j] multiplies cos^{n-j} t sin^j t.
  std::vector<std::vector<double>> coefficients;
  /// max over fit nodes and orders of |form - homotopy| / max |homotopy| of that order.
  double projection_residual = 0.0;

  CumulantVector at(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    CumulantVector out{CumulantKind::fluctuation, std::vector<double>(static_cast<std::size_t>(n0), 0.0)};
    for (int n = 1; n <= n0; ++n) {
      const auto& b = coefficients[static_cast<std::size_t>(n - 1)];
      double acc = 0.0;
      for (int j = 0; j <= n; ++j) acc += b[static_cast<std::size_t>(j)] * std::pow(c, n - j) * std::pow(s, j);
      out.values[static_cast<std::size_t>(n - 1)] = acc;
    }
    return out;
  }
};

inline CumulantForms fit_cumulant_forms(const HomotopyPath& path, int n0, int fit_nodes = 48) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  const auto source = path_cumulants(path, 0.0, n0);
  const auto dual = path_cumulants(path, half_pi, n0);
  const auto gl = gauss_legendre(static_cast<std::size_t>(fit_nodes));
  std::vector<double> ts;
  std::vector<CumulantVector> ks;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double t = 0.25 * std::numbers::pi * (gl.nodes[i] + 1.0);
    try {
      ks.push_back(path_cumulants(path, t, n0));
      ts.push_back(t);
    } catch (const DegeneratePoint&) {
      // a_t = 0 exactly at this node; the neighbours carry the fit.
    }
  }

  CumulantForms forms;
  forms.n0 = n0;
  forms.coefficients.resize(static_cast<std::size_t>(n0));
  for (int n = 1; n <= n0; ++n) {
    auto& b = forms.coefficients[static_cast<std::size_t>(n - 1)];
    b.assign(static_cast<std::size_t>(n + 1), 0.0);
    b.front() = source(n);
    b.back() += dual(n);
    if (n == 2) continue;  // v cos^2 + v' sin^2 already
    if (n < 2) continue;
    const auto rows = static_cast<Eigen::Index>(ts.size());
    Eigen::MatrixXd m(rows, n - 1);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double c = std::cos(ts[static_cast<std::size_t>(r)]), s = std::sin(ts[static_cast<std::size_t>(r)]);
      for (int j = 1; j < n; ++j) m(r, j - 1) = std::pow(c, n - j) * std::pow(s, j);
      rhs(r) = ks[static_cast<std::size_t>(r)](n) - b.front() * std::pow(c, n) - b.back() * std::pow(s, n);
    }
    const Eigen::VectorXd sol = m.colPivHouseholderQr().solve(rhs);
    for (int j = 1; j < n; ++j) b[static_cast<std::size_t>(j)] = sol(j - 1);
  }
  for (int n = 2; n <= n0; ++n) {
    double scale = 0.0, worst = 0.0;
    for (std::size_t r = 0; r < ts.size(); ++r) {
      const double hom = ks[r](n);
      scale = std::max(scale, std::abs(hom));
      worst = std::max(worst, std::abs(forms.at(ts[r])(n) - hom));
    }
    if (scale > 0.0) forms.projection_residual = std::max(forms.projection_residual, worst / scale);
  }
  return forms;
}

/// Homotopy tomograms on the uniform theta grid over [0, pi).
inline std::vector<Tomogram> homotopy_tomograms(const HomotopyPath& path, int n_theta, int n0,
                                                TomogramFamily family = TomogramFamily::consistent) {
  std::vector<Tomogram> out;
  out.reserve(static_cast<std::size_t>(n_theta));
  if (family == TomogramFamily::consistent) {
    const auto forms = fit_cumulant_forms(path, n0);
    for (int j = 0; j < n_theta; ++j) {
      const double t = theta_at(j, n_theta);
      out.emplace_back(forms.at(t), n0, t);
    }
    return out;
  }
  for (int j = 0; j < n_theta; ++j) {
    const double t = theta_at(j, n_theta);
    out.emplace_back(tomogram_cumulants(path, t, n0), n0, t);
  }
  return out;
}

struct GridSpec {
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int nx = 41, ny = 41;

  static GridSpec centered(double half_x, double half_y, int nx, int ny) {
    return {-half_x, half_x, -half_y, half_y, nx, ny};
  }
  /// Symmetric grid extending `extent` standard deviations along each axis.
  static GridSpec for_variances(double var_x, double var_y, int nx = 41, int ny = 41,
                                double extent = 6.0) {
    return centered(extent * std::sqrt(var_x), extent * std::sqrt(var_y), nx, ny);
  }

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double y(int j) const { return y_min + j * dy(); }

  void validate() const {
    if (nx < 2 || ny < 2) throw DomainError("grid needs at least 2 points per axis");
    if (!(x_max > x_min) || !(y_max > y_min)) throw DomainError("grid extents must be increasing");
  }
};

struct GridDiagnostics {
  double imaginary_residue = 0.0;
  double negativity_fraction = 0.0;
  int n_theta = 0;
  int r_nodes = 0;
  int n0 = 2;
};

/// R_N(x, y) sampled on a rectangular grid, values[j * nx + i] at (x_i, y_j).
struct QuasiDensityGrid {
  GridSpec spec;
  double h = 0.0;  // 2 k_B / N
  std::vector<double> values;
  GridDiagnostics diagnostics;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j * spec.nx + i)]; }

  double mass() const { return moment(0, 0); }

  /// sum x^p y^q R dx dy.
  double moment(int p, int q) const {
    double acc = 0.0;
    for (int j = 0; j < spec.ny; ++j) {
      const double yq = std::pow(spec.y(j), q);
      for (int i = 0; i < spec.nx; ++i) acc += std::pow(spec.x(i), p) * yq * at(i, j);
    }
    return acc * spec.dx() * spec.dy();
  }

  std::vector<double> x_moments(int nmax) const {
    std::vector<double> m;
    for (int n = 0; n <= nmax; ++n) m.push_back(moment(n, 0));
    return m;
  }
  std::vector<double> y_moments(int nmax) const {
    std::vector<double> m;
    for (int n = 0; n <= nmax; ++n) m.push_back(moment(0, n));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

inline double negative_mass_fraction(const std::vector<double>& values) {
  double neg = 0.0, total = 0.0;
  for (double v : values) {
    total += std::abs(v);
    if (v < 0.0) neg -= v;
  }
  return total > 0.0 ? neg / total : 0.0;
}

struct ReconstructionOptions {
  int r_nodes = 96;      // half-range Gauss nodes per sign of r
  unsigned threads = 0;  // 0: default_thread_count()
  double max_imaginary = 1e-6;
};

inline QuasiDensityGrid reconstruct(const std::vector<Tomogram>& tomograms, double h,
                                    const GridSpec& spec, const ReconstructionOptions& opt = {}) {
  const int n_theta = static_cast<int>(tomograms.size());
  if (n_theta < 32) throw DomainError("reconstruction needs at least 32 angles, got " + std::to_string(n_theta));
  if (!(h > 0.0)) throw DomainError("semiclassical parameter h must be positive");
  if (opt.r_nodes < 8) throw DomainError("reconstruction needs at least 8 r-nodes");
  spec.validate();
  for (int j = 0; j < n_theta; ++j)
    if (std::abs(tomograms[static_cast<std::size_t>(j)].angle() - theta_at(j, n_theta)) > 1e-12)
      throw DomainError("tomogram angles must be the uniform grid j*pi/n_theta");

  const auto rule = half_range_rule(static_cast<std::size_t>(opt.r_nodes));
  const std::size_t nr = rule.size();
  // Per angle: node positions r_k and complex coefficients for e^{+i r rho} (r > 0)
  // and e^{-i r rho} (r < 0).
  std::vector<double> cos_t(static_cast<std::size_t>(n_theta)), sin_t(cos_t.size());
  std::vector<double> r_nodes(cos_t.size() * nr);
  std::vector<std::complex<double>> c_pos(r_nodes.size()), c_neg(r_nodes.size());
  const double prefactor = (std::numbers::pi / n_theta) / (4.0 * std::numbers::pi * std::numbers::pi);
  for (int j = 0; j < n_theta; ++j) {
    const auto& tomo = tomograms[static_cast<std::size_t>(j)];
    const auto uj = static_cast<std::size_t>(j);
    cos_t[uj] = std::cos(tomo.angle());
    sin_t[uj] = std::sin(tomo.angle());
    const double scale = std::sqrt(2.0 / tomo.variance());
    for (std::size_t k = 0; k < nr; ++k) {
      const double r = scale * rule.nodes[k];
      const double w = prefactor * scale * scale * rule.weights[k];
      r_nodes[uj * nr + k] = r;
      c_pos[uj * nr + k] = w * tomo.characteristic_polynomial(-r);
      c_neg[uj * nr + k] = w * tomo.characteristic_polynomial(r);
    }
  }

  QuasiDensityGrid grid;
  grid.spec = spec;
  grid.h = h;
  grid.values.assign(static_cast<std::size_t>(spec.nx * spec.ny), 0.0);
  std::vector<double> imag(static_cast<std::size_t>(spec.ny), 0.0);
  parallel_for(static_cast<std::size_t>(spec.ny), opt.threads ? opt.threads : default_thread_count(),
               [&](std::size_t row) {
                 const double y = spec.y(static_cast<int>(row));
                 double row_imag = 0.0;
                 for (int i = 0; i < spec.nx; ++i) {
                   const double x = spec.x(i);
                   std::complex<double> acc = 0.0;
                   for (std::size_t j = 0; j < cos_t.size(); ++j) {
                     const double rho = x * cos_t[j] + y * sin_t[j];
                     std::complex<double> part = 0.0;
                     for (std::size_t k = 0; k < nr; ++k) {
                       const double phase = r_nodes[j * nr + k] * rho;
                       const std::complex<double> e(std::cos(phase), std::sin(phase));
                       part += c_pos[j * nr + k] * e + c_neg[j * nr + k] * std::conj(e);
                     }
                     acc += part;
                   }
                   grid.values[row * static_cast<std::size_t>(spec.nx) + static_cast<std::size_t>(i)] = acc.real();
                   row_imag = std::max(row_imag, std::abs(acc.imag()));
                 }
                 imag[row] = row_imag;
               });
  grid.diagnostics.imaginary_residue = *std::max_element(imag.begin(), imag.end());
  grid.diagnostics.negativity_fraction = negative_mass_fraction(grid.values);
  grid.diagnostics.n_theta = n_theta;
  grid.diagnostics.r_nodes = opt.r_nodes;
  grid.diagnostics.n0 = tomograms.front().degree();
  if (grid.diagnostics.imaginary_residue > opt.max_imaginary)
    throw QuadratureFailure("imaginary residue " + std::to_string(grid.diagnostics.imaginary_residue) +
                            " exceeds " + std::to_string(opt.max_imaginary));
  return grid;
}

/// Closed-form Gaussian quasidensity with independent variances on the grid.
inline QuasiDensityGrid gaussian_grid(double variance_x, double variance_y, double h, const GridSpec& spec) {
  spec.validate();
  QuasiDensityGrid grid;
  grid.spec = spec;
  grid.h = h;
  grid.values.resize(static_cast<std::size_t>(spec.nx * spec.ny));
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(variance_x * variance_y));
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      const double x = spec.x(i), y = spec.y(j);
      grid.values[static_cast<std::size_t>(j * spec.nx + i)] =
          norm * std::exp(-0.5 * x * x / variance_x - 0.5 * y * y / variance_y);
    }
  return grid;
}

/// (N / 2 pi) exp{N (x^2 s'' + y^2 / s'') / 2}, k_B = 1: variances 1/(N lambda)
/// and lambda/N, saturating Var_x Var_y = (h/2)^2 with h = 2/N.
inline QuasiDensityGrid gaussian_limit(const ManifoldPoint& alpha, double n, const GridSpec& spec) {
  if (!(n > 0.0)) throw DomainError("particle count N must be positive");
  const double lambda = alpha.lambda();
  return gaussian_grid(1.0 / (n * lambda), lambda / n, 2.0 / n, spec);
}

/// 2 pi h sum R^2 dx dy; 1 for a Gaussian saturating the uncertainty product.
inline double purity(const QuasiDensityGrid& grid) {
  const double mass = grid.mass();
  const double mx = grid.moment(1, 0) / mass, my = grid.moment(0, 1) / mass;
  const double sx = std::sqrt(std::max(0.0, grid.moment(2, 0) / mass - mx * mx));
  const double sy = std::sqrt(std::max(0.0, grid.moment(0, 2) / mass - my * my));
  constexpr double required = 6.0 * (1.0 - 1e-6);
  if (grid.spec.x_max - mx < required * sx || mx - grid.spec.x_min < required * sx ||
      grid.spec.y_max - my < required * sy || my - grid.spec.y_min < required * sy)
    throw GridTooSmall("purity needs the grid to cover 6 standard deviations per axis");
  double acc = 0.0;
  for (double v : grid.values) acc += v * v;
  return 2.0 * std::numbers::pi * grid.h * acc * grid.spec.dx() * grid.spec.dy();
}

/// Grid as CSV triples with a header row.
inline void write_grid_csv(std::ostream& os, const QuasiDensityGrid& grid) {
  os << "x,y,value\n";
  char buf[96];
  for (int j = 0; j < grid.spec.ny; ++j)
    for (int i = 0; i < grid.spec.nx; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.spec.x(i), grid.spec.y(j), grid.at(i, j));
      os << buf;
    }
}

}  // namespace thermoflux

#endif  // THERMOFLUX_TOMOGRAPHY_HPP
