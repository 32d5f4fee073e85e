#ifndef THERMOFLUX_QUANTUM_REFERENCE_HPP
#define THERMOFLUX_QUANTUM_REFERENCE_HPP

// Quantum reference objects for the tomography analogy: coherent states and
// their Wigner functions, the harmonic-oscillator propagator and the Gaussian
// evolution law
//   c_t = x0 cos t + y0 sin t,   lambda_t = (cos^2 t / lambda + lambda sin^2 t)^{-1}.
//
// Wave profiles are complex Gaussians exp(-alpha x^2 + b x + c). The propagator
//   G(y, x, t) = (2 pi i h sin t)^{-1/2} exp{(i/h)(cot t (y^2 + x^2)/2 - y x / sin t)}
// is applied by Gauss-Hermite quadrature along the steepest-descent line
// x = x_c + s / sqrt(A) of the combined exponent -A x^2 + B x, which turns the
// oscillatory integrand into a Gauss-Hermite weight times a smooth factor.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "thermoflux/errors.hpp"
#include "thermoflux/quadrature.hpp"

namespace thermoflux {

using cdouble = std::complex<double>;

struct CoherentState {
  double p0 = 0.0;
  double q0 = 0.0;
  double lambda = 1.0;
  double hbar = 1.0;
};

namespace detail {

inline void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

}  // namespace detail

/// psi(x) = (lambda / (2 pi hbar))^{1/4} exp(-lambda (x - q0)^2 / (4 hbar) + i p0 x / hbar), unit norm.
inline cdouble coherent_wavefunction(const CoherentState& s, double x) {
  detail::check_positive(s.lambda, "lambda");
  detail::check_positive(s.hbar, "hbar");
  const double d = x - s.q0;
  const double norm = std::pow(s.lambda / (2.0 * std::numbers::pi * s.hbar), 0.25);
  return norm * std::exp(cdouble(-s.lambda * d * d / (4.0 * s.hbar), s.p0 * x / s.hbar));
}

/// W(p, q) = 2 exp(-lambda (q - q0)^2 / (2 hbar)) exp(-2 (p - p0)^2 / (lambda hbar)),
/// normalized so that (2 pi hbar)^{-1} int int W dp dq = 1.
inline double wigner_coherent(const CoherentState& s, double p, double q) {
  detail::check_positive(s.lambda, "lambda");
  detail::check_positive(s.hbar, "hbar");
  const double dq = q - s.q0, dp = p - s.p0;
  return 2.0 * std::exp(-s.lambda * dq * dq / (2.0 * s.hbar)) * std::exp(-2.0 * dp * dp / (s.lambda * s.hbar));
}

struct WignerMoments {
  double mass = 0.0;        // (2 pi hbar)^{-1} int int W
  double mean_q = 0.0;
  double mean_p = 0.0;
  double variance_q = 0.0;
  double variance_p = 0.0;
  double uncertainty_product() const { return variance_q * variance_p; }
};

/// Moments of W by a tensor Gauss-Hermite rule scaled to each axis.
inline WignerMoments wigner_moments(const CoherentState& s, std::size_t nodes = 32) {
  detail::check_positive(s.lambda, "lambda");
  detail::check_positive(s.hbar, "hbar");
  const auto rule = gauss_hermite(nodes);
  // q = q0 + sq u, p = p0 + sp v with e^{-u^2} e^{-v^2} matching the W exponents.
  const double sq = std::sqrt(2.0 * s.hbar / s.lambda);
  const double sp = std::sqrt(s.lambda * s.hbar / 2.0);
  long double m0 = 0, mq = 0, mp = 0, mqq = 0, mpp = 0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double q = s.q0 + sq * rule.nodes[i];
      const double p = s.p0 + sp * rule.nodes[j];
      const double u = rule.nodes[i], v = rule.nodes[j];
      // W e^{u^2 + v^2} is the constant 2 for a coherent state; evaluate W honestly.
      const long double w = static_cast<long double>(rule.weights[i]) * rule.weights[j] *
                            wigner_coherent(s, p, q) * std::exp(u * u + v * v) * sq * sp;
      m0 += w;
      mq += w * q;
      mp += w * p;
      mqq += w * q * q;
      mpp += w * p * p;
    }
  WignerMoments out;
  out.mass = static_cast<double>(m0 / (2.0L * std::numbers::pi_v<long double> * s.hbar));
  out.mean_q = static_cast<double>(mq / m0);
  out.mean_p = static_cast<double>(mp / m0);
  out.variance_q = static_cast<double>(mqq / m0 - (mq / m0) * (mq / m0));
  out.variance_p = static_cast<double>(mpp / m0 - (mp / m0) * (mp / m0));
  return out;
}

struct GaussianEvolution {
  double t = 0.0;
  double c_t = 0.0;
  double lambda_t = 1.0;

  /// Variance of |phi^t|^2: (h/2)(cos^2 t / lambda + lambda sin^2 t) = h / (2 lambda_t).
  double variance(double h) const { return 0.5 * h / lambda_t; }
};

inline GaussianEvolution gaussian_evolution_params(double x0, double y0, double lambda, double t) {
  detail::check_positive(lambda, "lambda");
  const double c = std::cos(t), s = std::sin(t);
  return {t, x0 * c + y0 * s, 1.0 / (c * c / lambda + lambda * s * s)};
}

/// exp(-alpha x^2 + b x + c) with Re alpha > 0.
struct GaussianProfile {
  cdouble alpha{1.0, 0.0};
  cdouble b{0.0, 0.0};
  cdouble c{0.0, 0.0};

  cdouble log_value(cdouble x) const { return -alpha * x * x + b * x + c; }
  cdouble operator()(cdouble x) const { return std::exp(log_value(x)); }

  /// Closed-form moments of |phi|^2.
  double norm2() const {
    const double ra = alpha.real(), rb = b.real();
    return std::sqrt(std::numbers::pi / (2.0 * ra)) * std::exp(rb * rb / (2.0 * ra) + 2.0 * c.real());
  }
  double mean() const { return b.real() / (2.0 * alpha.real()); }
  double variance() const { return 0.25 / alpha.real(); }
  /// Width parameter lambda of a density with variance h / (2 lambda).
  double width(double h) const { return 2.0 * h * alpha.real(); }
};

/// phi_h(x; lambda, x0, y0) = (lambda / (pi h))^{1/4} exp(-lambda (x - x0)^2 / (2h) + i y0 x / h).
inline GaussianProfile phi_h(double lambda, double x0, double y0, double h) {
  detail::check_positive(lambda, "lambda");
  detail::check_positive(h, "h");
  GaussianProfile g;
  g.alpha = lambda / (2.0 * h);
  g.b = cdouble(lambda * x0 / h, y0 / h);
  g.c = cdouble(0.25 * std::log(lambda / (std::numbers::pi * h)) - lambda * x0 * x0 / (2.0 * h), 0.0);
  return g;
}

/// int |phi|^2 dx, mean and variance by real-axis Gauss-Hermite quadrature.
inline std::array<double, 3> numeric_density_moments(const GaussianProfile& g, std::size_t nodes = 64) {
  const auto rule = gauss_hermite(nodes);
  const double mu = g.mean();
  const double scale = std::sqrt(2.0 * g.variance());
  long double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    const double x = mu + scale * u;
    const long double d = std::norm(g(x)) * std::exp(u * u) * rule.weights[i] * scale;
    m0 += d;
    m1 += d * (x - mu);
    m2 += d * (x - mu) * (x - mu);
  }
  const long double mean = m1 / m0;
  return {static_cast<double>(m0), static_cast<double>(mu + mean), static_cast<double>(m2 / m0 - mean * mean)};
}

struct PropagateOptions {
  std::size_t nodes = 128;
};

namespace detail {

/// log phi^t(y) along the steepest-descent line; the Gauss-Hermite sum is close
/// to sqrt(pi), so its principal logarithm never crosses a branch cut.
class SaddlePropagator {
public:
  SaddlePropagator(const GaussianProfile& phi, double t, double h, std::size_t nodes)
      : phi_(phi), h_(h), rule_(gauss_hermite(nodes)) {
    check_positive(h, "h");
    sn_ = std::sin(t);
    if (std::abs(sn_) < 1e-8) throw SingularTime("propagator is singular at t in pi Z (|sin t| < 1e-8)");
    if (!(phi.alpha.real() > 0.0)) throw DomainError("initial profile must be square integrable (Re alpha > 0)");
    cot_ = std::cos(t) / sn_;
    a_ = phi.alpha - kI * cot_ / (2.0 * h);
    sqrt_a_ = std::sqrt(a_);
    log_pref_ = -0.5 * std::log(2.0 * std::numbers::pi * kI * h * sn_);
  }

  cdouble log_at(double y) const {
    auto log_integrand = [&](cdouble x) {
      return (kI / h_) * (0.5 * cot_ * (y * y + x * x) - y * x / sn_) + phi_.log_value(x);
    };
    const cdouble xc = (phi_.b - kI * y / (h_ * sn_)) / (2.0 * a_);
    const cdouble peak = log_integrand(xc);
    cdouble sum = 0.0;
    for (std::size_t k = 0; k < rule_.size(); ++k) {
      const double s = rule_.nodes[k];
      sum += rule_.weights[k] * std::exp(log_integrand(xc + s / sqrt_a_) - peak + s * s);
    }
    return log_pref_ + peak + std::log(sum) - std::log(sqrt_a_);
  }

private:
  static constexpr cdouble kI{0.0, 1.0};
  GaussianProfile phi_;
  double h_;
  QuadratureRule rule_;
  double sn_ = 1.0, cot_ = 0.0;
  cdouble a_, sqrt_a_, log_pref_;
};

}  // namespace detail

/// Values phi^t(y) = int G(y, x, t) phi(x) dx at the given points.
inline std::vector<cdouble> propagate_values(const GaussianProfile& phi, const std::vector<double>& ys, double t,
                                             double h, PropagateOptions opt = {}) {
  const detail::SaddlePropagator prop(phi, t, h, opt.nodes);
  std::vector<cdouble> out;
  out.reserve(ys.size());
  for (double y : ys) out.push_back(std::exp(prop.log_at(y)));
  return out;
}

/// Propagates a Gaussian profile by angle t. The output parameters are read
/// off log phi^t at y = 0, +-sqrt(h), which fix the quadratic exponent; the
/// result can be propagated again.
inline GaussianProfile propagate(const GaussianProfile& phi, double t, double h, PropagateOptions opt = {}) {
  const detail::SaddlePropagator prop(phi, t, h, opt.nodes);
  const double d = std::sqrt(h);
  const cdouble lm = prop.log_at(-d), l0 = prop.log_at(0.0), lp = prop.log_at(d);
  GaussianProfile out;
  out.alpha = -(lp - 2.0 * l0 + lm) / (2.0 * d * d);
  out.b = (lp - lm) / (2.0 * d);
  out.c = l0;
  if (!(out.alpha.real() > 0.0) || !std::isfinite(out.alpha.real()))
    throw QuadratureFailure("propagated profile lost square integrability");
  return out;
}

/// h-Fourier transform (2 pi e^{i pi/2} h)^{-1/2} int e^{-i p x / h} phi(x) dx by the
/// trapezoid rule on the real axis over +-14 standard deviations of |phi|^2.
inline std::vector<cdouble> h_fourier(const GaussianProfile& phi, const std::vector<double>& ps, double h,
                                      int points = 4001) {
  detail::check_positive(h, "h");
  if (points < 3) throw DomainError("h_fourier needs at least 3 points");
  const double mu = phi.mean();
  const double half = 14.0 * std::sqrt(phi.variance());
  const double dx = 2.0 * half / (points - 1);
  const cdouble pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::exp(cdouble(0.0, 0.5 * std::numbers::pi)) * h);
  std::vector<cdouble> out;
  out.reserve(ps.size());
  for (double p : ps) {
    cdouble sum = 0.0;
    for (int k = 0; k < points; ++k) {
      const double x = mu - half + k * dx;
      sum += std::exp(cdouble(0.0, -p * x / h) + phi.log_value(x));
    }
    out.push_back(pref * sum * dx);
  }
  return out;
}

}  // namespace thermoflux

#endif  // THERMOFLUX_QUANTUM_REFERENCE_HPP
