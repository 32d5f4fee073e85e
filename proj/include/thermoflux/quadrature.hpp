#ifndef THERMOFLUX_QUADRATURE_HPP
#define THERMOFLUX_QUADRATURE_HPP

// Gaussian quadrature rules built from three-term recurrences (Golub-Welsch),
// with Newton polishing of the nodes and Christoffel weights computed from the
// orthonormal polynomials.

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "thermoflux/errors.hpp"

namespace thermoflux {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(nodes[0]));
    R sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Monic recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, stored as
/// alpha_k and sqrt(beta_k) (beta_0 unused), plus the total mass mu0.
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> sqrt_beta;
  double mu0 = 1.0;
};

namespace detail {

/// Orthonormal polynomial values q_0..q_{n-1} at x, and q_n' via the recurrence.
struct OrthonormalEval {
  double qn = 0.0;       // q_n(x)
  double dqn = 0.0;      // q_n'(x)
  double sum_sq = 0.0;   // sum_{k<n} q_k(x)^2
};

inline OrthonormalEval eval_orthonormal(const Recurrence& rec, std::size_t n, double x) {
  double q_prev = 0.0, dq_prev = 0.0;
  double q = 1.0 / std::sqrt(rec.mu0), dq = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum_sq += q * q;
    const double b_k = (k == 0) ? 0.0 : rec.sqrt_beta[k];
    const double b_next = rec.sqrt_beta[k + 1];
    const double q_next = ((x - rec.alpha[k]) * q - b_k * q_prev) / b_next;
    const double dq_next = (q + (x - rec.alpha[k]) * dq - b_k * dq_prev) / b_next;
    q_prev = q;
    dq_prev = dq;
    q = q_next;
    dq = dq_next;
  }
  return {q, dq, sum_sq};
}

}  // namespace detail

/// n-point Gauss rule for the measure described by `rec`; needs n+1 recurrence terms.
inline QuadratureRule gauss_from_recurrence(const Recurrence& rec, std::size_t n) {
  if (n == 0 || rec.alpha.size() < n + 1 || rec.sqrt_beta.size() < n + 1)
    throw IllConditioned("recurrence too short for " + std::to_string(n) + "-point rule");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (std::size_t k = 0; k < n; ++k) diag[static_cast<Eigen::Index>(k)] = rec.alpha[k];
  for (std::size_t k = 1; k < n; ++k)
    sub[static_cast<Eigen::Index>(k - 1)] = rec.sqrt_beta[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(static_cast<Eigen::Index>(n - 1)),
                                Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw IllConditioned("Jacobi eigenproblem failed");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double x = solver.eigenvalues()[static_cast<Eigen::Index>(j)];
    for (int it = 0; it < 3; ++it) {
      const auto e = detail::eval_orthonormal(rec, n, x);
      if (e.dqn == 0.0) break;
      const double dx = e.qn / e.dqn;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[j] = x;
    rule.weights[j] = 1.0 / detail::eval_orthonormal(rec, n, x).sum_sq;
  }
  return rule;
}

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
inline QuadratureRule gauss_hermite(std::size_t n) {
  Recurrence rec;
  rec.alpha.assign(n + 1, 0.0);
  rec.sqrt_beta.resize(n + 1);
  rec.sqrt_beta[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) rec.sqrt_beta[k] = std::sqrt(0.5 * static_cast<double>(k));
  rec.mu0 = std::sqrt(std::numbers::pi);
  return gauss_from_recurrence(rec, n);
}

/// Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(std::size_t n) {
  Recurrence rec;
  rec.alpha.assign(n + 1, 0.0);
  rec.sqrt_beta.resize(n + 1);
  rec.sqrt_beta[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    rec.sqrt_beta[k] = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  rec.mu0 = 2.0;
  return gauss_from_recurrence(rec, n);
}

/// Recurrence for a discrete measure sum_i w_i delta(x - x_i), by the
/// normalized Stieltjes (Lanczos) procedure.
inline Recurrence discrete_recurrence(const std::vector<double>& x, const std::vector<double>& w,
                                      std::size_t terms) {
  const std::size_t m = x.size();
  Recurrence rec;
  rec.alpha.resize(terms);
  rec.sqrt_beta.resize(terms);
  rec.sqrt_beta[0] = 0.0;
  double mass = 0.0;
  for (double wi : w) mass += wi;
  rec.mu0 = mass;
  std::vector<double> q(m, 1.0 / std::sqrt(mass)), q_prev(m, 0.0), r(m);
  for (std::size_t k = 0; k < terms; ++k) {
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += w[i] * x[i] * q[i] * q[i];
    rec.alpha[k] = a;
    if (k + 1 == terms) break;
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (x[i] - a) * q[i] - rec.sqrt_beta[k] * q_prev[i];
      norm += w[i] * r[i] * r[i];
    }
    norm = std::sqrt(norm);
    rec.sqrt_beta[k + 1] = norm;
    for (std::size_t i = 0; i < m; ++i) {
      q_prev[i] = q[i];
      q[i] = r[i] / norm;
    }
  }
  return rec;
}

/// Gauss rule for the half-range weight u*exp(-u^2) on [0, inf). This is the
/// weight that absorbs the |r| ramp filter of a Gaussian-damped Fourier integral.
inline QuadratureRule half_range_rule(std::size_t n) {
  // Discretize the measure with composite Gauss-Legendre on [0, 30]; the
  // weight is below 1e-300 beyond that.
  constexpr std::size_t panels = 120;
  constexpr double upper = 30.0;
  const auto gl = gauss_legendre(32);
  std::vector<double> x, w;
  x.reserve(panels * gl.size());
  w.reserve(panels * gl.size());
  const double width = upper / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = width * static_cast<double>(p);
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double u = lo + 0.5 * width * (gl.nodes[i] + 1.0);
      x.push_back(u);
      w.push_back(0.5 * width * gl.weights[i] * u * std::exp(-u * u));
    }
  }
  return gauss_from_recurrence(discrete_recurrence(x, w, n + 1), n);
}

}  // namespace thermoflux

#endif  // THERMOFLUX_QUADRATURE_HPP
