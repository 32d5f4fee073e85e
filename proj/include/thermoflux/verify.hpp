#ifndef THERMOFLUX_VERIFY_HPP
#define THERMOFLUX_VERIFY_HPP

// Property and oracle suites shared by `thermoflux verify` and the acceptance
// binary. Each suite returns named metrics, a pass flag and its wall time; the
// metrics (not the timing) are deterministic for a given seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "thermoflux/core_thermo.hpp"
#include "thermoflux/cumulant_algebra.hpp"
#include "thermoflux/duality.hpp"
#include "thermoflux/gibbs_sampler.hpp"
#include "thermoflux/homotopy.hpp"
#include "thermoflux/quantum_reference.hpp"
#include "thermoflux/tomography.hpp"

namespace thermoflux {

struct VerifyOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: default_thread_count()
};

struct Metric {
  std::string name;
  double value = 0.0;
  double limit = 0.0;  // value must be <= limit (or >= when at_least)
  bool at_least = false;
  bool ok() const { return at_least ? value >= limit : value <= limit; }
};

struct SuiteResult {
  int criterion = 0;
  std::string name;
  std::vector<Metric> metrics;
  double seconds = 0.0;
  double time_budget = 0.0;

  bool passed() const {
    if (seconds > time_budget) return false;
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.ok(); });
  }
  /// Metrics rendered with %.17g; identical strings mean identical results.
  std::string fingerprint() const {
    std::string out = name;
    char buf[96];
    for (const auto& m : metrics) {
      std::snprintf(buf, sizeof buf, ";%s=%.17g", m.name.c_str(), m.value);
      out += buf;
    }
    return out;
  }
};

namespace detail {

/// Parameter draws from mt19937_64 via open_uniform, independent of the
/// standard library's distribution implementations.
class ParamStream {
public:
  explicit ParamStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * open_uniform(gen_()); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
  std::mt19937_64 gen_;
};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

template <class Body>
SuiteResult timed(int criterion, std::string name, double budget, Body&& body) {
  SuiteResult r;
  r.criterion = criterion;
  r.name = std::move(name);
  r.time_budget = budget;
  const auto t0 = std::chrono::steady_clock::now();
  body(r.metrics);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

/// 1. Gibbs variance e^{beta a} eps^2 = eps(eps + a) = 1/lambda and lambda phi'' = 1.
inline SuiteResult suite_exact_identities(const VerifyOptions& opt = {}) {
  return detail::timed(1, "exact-identity", 1.0, [&](std::vector<Metric>& m) {
    detail::ParamStream rng(opt.seed + 1);
    double worst_var = 0.0, worst_leg = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double a = rng.log_uniform(0.1, 10.0);
      const double x = rng.uniform(0.1, 5.0);
      const double beta = x / a;
      const auto st = energy_stats(beta, a, 1.0);
      const double gibbs = std::exp(x) * st.mean * st.mean;
      const auto alpha = ManifoldPoint::from_energy(st.mean, a);
      worst_var = std::max({worst_var, detail::rel_err(gibbs, st.mean * (st.mean + a)),
                            detail::rel_err(gibbs, 1.0 / alpha.lambda()), detail::rel_err(st.variance, gibbs)});
      const auto phi = legendre_phi({beta, BetaSource::thermostat}, a);
      worst_leg = std::max(worst_leg, std::abs(alpha.lambda() * phi.d2phi - 1.0));
    }
    m.push_back({"max_rel_variance_identity", worst_var, 1e-12});
    m.push_back({"max_legendre_residual", worst_leg, 1e-10});
  });
}

/// 2. c(n, m) three ways for n <= 15; power sums three ways for m <= 8, n <= 200.
inline SuiteResult suite_coefficients(const VerifyOptions& = {}) {
  return detail::timed(2, "coefficient", 1.0, [&](std::vector<Metric>& m) {
    const CoefficientTable table(15);
    double c_mismatch = 0.0;
    for (int n = 1; n <= 15; ++n)
      for (int k = 1; k <= n; ++k) {
        const Int128 rec = table(n, k);
        if (rec != c_explicit(n, k) || rec != detail::checked_mul(factorial(k - 1), stirling2(n, k))) c_mismatch += 1;
      }
    double ps_mismatch = 0.0;
    for (int p = 1; p <= 8; ++p)
      for (int n = 1; n <= 200; ++n)
        if (!power_sum_check(p, n).agree()) ps_mismatch += 1;
    m.push_back({"c_table_mismatches", c_mismatch, 0.0});
    m.push_back({"power_sum_mismatches", ps_mismatch, 0.0});
  });
}

/// 3. K_1..K_5 from the c-table against Richardson differences of log Z.
inline SuiteResult suite_cumulant_derivatives(const VerifyOptions& opt = {}) {
  return detail::timed(3, "cumulant-vs-derivative", 10.0, [&](std::vector<Metric>& m) {
    detail::ParamStream rng(opt.seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double a = rng.log_uniform(0.2, 5.0);
      const double x = rng.uniform(0.2, 3.0);
      const double n = rng.log_uniform(1.0, 100.0);
      const auto k = energy_cumulants(x / a, a, n, 5);
      for (int order = 1; order <= 5; ++order)
        worst = std::max(worst, detail::rel_err(log_partition_derivative(x / a, a, n, order), k(order)));
    }
    m.push_back({"max_rel_error_K1_K5", worst, 1e-6});
  });
}

/// 4. k-statistics of a Monte-Carlo run against exact cumulants, in standard errors.
inline SuiteResult suite_monte_carlo(const VerifyOptions& opt = {}) {
  return detail::timed(4, "monte-carlo-oracle", 60.0, [&](std::vector<Metric>& m) {
    SamplerConfig cfg;
    cfg.seed = opt.seed;
    cfg.sweeps = 100000;
    cfg.a = 1.0;
    cfg.beta = 1.0;
    cfg.n_particles = 100;
    cfg.threads = opt.threads;
    const auto run = sample_energies(cfg);
    const auto est = empirical_cumulants(run, 4);
    const auto exact = energy_cumulants(1.0, 1.0, 100.0, 4);
    for (int n = 1; n <= 4; ++n) {
      const auto i = static_cast<std::size_t>(n - 1);
      m.push_back({"z_k" + std::to_string(n), std::abs(est.estimates[i] - exact(n)) / est.standard_errors[i], 5.0});
    }
  });
}

/// 5. Both duality closures at random points: residuals, variance product, sign laws.
inline SuiteResult suite_duality(const VerifyOptions& opt = {}) {
  return detail::timed(5, "duality", 1.0, [&](std::vector<Metric>& m) {
    detail::ParamStream rng(opt.seed + 5);
    double worst_res = 0.0, worst_prod = 0.0, sign_fail = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double a = rng.log_uniform(0.1, 10.0);
      const double x = rng.uniform(0.1, 5.0);
      const double n = rng.log_uniform(1.0, 1000.0);
      for (auto variant : {DualVariant::symmetric, DualVariant::remark1}) {
        const auto pair = solve_dual(a, x / a, n, variant);
        const auto rep = verify_duality(pair);
        worst_res = std::max({worst_res, pair.residuals[0], pair.residuals[1]});
        worst_prod = std::max(worst_prod, std::abs(rep.scaled_variance_product - 1.0));
        const double y = pair.dual.beta * pair.dual.a;
        const bool law = variant == DualVariant::symmetric
                             ? y < 0.0
                             : (pair.dual.a > 0.0 && pair.dual.beta > 0.0 && y > 0.0);
        if (!law || !pair.sign_law_holds) sign_fail += 1;
      }
    }
    m.push_back({"max_equation_residual", worst_res, 1e-10});
    m.push_back({"max_variance_product_error", worst_prod, 1e-9});
    m.push_back({"sign_law_failures", sign_fail, 0.0});
  });
}

/// 6. Homotopy endpoints, kappa_2 interpolation and N-cancellation.
inline SuiteResult suite_homotopy(const VerifyOptions& opt = {}) {
  return detail::timed(6, "homotopy", 1.0, [&](std::vector<Metric>& m) {
    detail::ParamStream rng(opt.seed + 6);
    double worst_end = 0.0, worst_k2 = 0.0, n_mismatch = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double a = rng.log_uniform(0.2, 5.0);
      const double x = rng.uniform(0.2, 4.0);
      const double n = rng.log_uniform(1.0, 1000.0);
      const auto pair = solve_dual(a, x / a, n, DualVariant::remark1);
      const auto path = HomotopyPath::from_dual(pair);
      const auto p0 = path_params(path, 0.0);
      const auto p1 = path_params(path, 0.5 * std::numbers::pi);
      worst_end = std::max({worst_end, detail::rel_err(p0.a, a), detail::rel_err(p0.beta, x / a),
                            detail::rel_err(p1.a, pair.dual.a), detail::rel_err(p1.beta, pair.dual.beta)});
      for (int j = 0; j < 50; ++j) {
        const double t = 0.5 * std::numbers::pi * (j + 0.5) / 50.0;
        worst_k2 = std::max(worst_k2, detail::rel_err(path_cumulants(path, t, 2)(2), path.variance_at(t)));
      }
      // N enters only through N v_t: scaling N by powers of two leaves (a_t, beta_t) bit-identical.
      for (double c : {0.5, 2.0, 8.0}) {
        const auto scaled = path.rescaled(c);
        for (int j = 0; j <= 8; ++j) {
          const double t = 0.5 * std::numbers::pi * j / 8.0;
          const auto u = path_params(path, t), v = path_params(scaled, t);
          if (u.a != v.a || u.beta != v.beta) n_mismatch += 1;
        }
      }
    }
    m.push_back({"max_endpoint_error", worst_end, 1e-10});
    m.push_back({"max_kappa2_interpolation_error", worst_k2, 1e-12});
    m.push_back({"n_cancellation_mismatches", n_mismatch, 0.0});
  });
}

/// Configuration of the Gaussian round trip used by suite 7 and the determinism check.
inline QuasiDensityGrid gaussian_round_trip(unsigned threads, QuasiDensityGrid* exact = nullptr) {
  constexpr double n = 100.0;
  const auto alpha = ManifoldPoint::from_beta(1.0, 1.0);
  const auto fl = quasi_fluctuations(alpha, n);
  const auto spec = GridSpec::for_variances(fl.variance_eps(), fl.variance_beta(), 41, 41);
  if (exact) *exact = gaussian_limit(alpha, n, spec);
  return reconstruct(gaussian_tomograms(fl.variance_eps(), fl.variance_beta(), 64), 2.0 / n, spec,
                     {96, threads, 1e-6});
}

/// 7. Gaussian tomogram family reconstructed against the closed-form limit.
inline SuiteResult suite_gaussian_tomography(const VerifyOptions& opt = {}) {
  return detail::timed(7, "tomography-gaussian", 120.0, [&](std::vector<Metric>& m) {
    QuasiDensityGrid exact;
    const auto grid = gaussian_round_trip(opt.threads, &exact);
    double linf = 0.0;
    for (std::size_t i = 0; i < grid.values.size(); ++i)
      linf = std::max(linf, std::abs(grid.values[i] - exact.values[i]));
    m.push_back({"linf_vs_closed_form", linf, 1e-6});
    m.push_back({"mass_error", std::abs(grid.mass() - 1.0), 1e-4});
    m.push_back({"purity_error", std::abs(purity(grid) - 1.0), 1e-3});
  });
}

/// Non-Gaussian reconstruction used by suite 8 and the determinism check.
inline QuasiDensityGrid non_gaussian_reconstruction(unsigned threads, std::vector<Tomogram>* family = nullptr) {
  constexpr double n = 100.0;
  const auto path = HomotopyPath::from_system(1.0, 1.0, n, DualVariant::remark1);
  auto tomos = homotopy_tomograms(path, 64, 4, TomogramFamily::consistent);
  const auto spec = GridSpec::for_variances(path.variance(), path.variance_dual(), 61, 61, 8.0);
  auto grid = reconstruct(tomos, 2.0 / n, spec, {96, threads, 1e-6});
  if (family) *family = std::move(tomos);
  return grid;
}

/// 8. n0 = 4 homotopy tomograms: marginal moments of R against the input tomograms.
inline SuiteResult suite_non_gaussian_tomography(const VerifyOptions& opt = {}) {
  return detail::timed(8, "tomography-non-gaussian", 300.0, [&](std::vector<Metric>& m) {
    std::vector<Tomogram> family;
    const auto grid = non_gaussian_reconstruction(opt.threads, &family);
    const auto mx = grid.x_moments(4), my = grid.y_moments(4);
    const auto& tx = family.front().target_moments();
    const auto& ty = family[family.size() / 2].target_moments();
    double worst = 0.0;
    for (std::size_t k = 0; k <= 4; ++k) worst = std::max({worst, std::abs(mx[k] - tx[k]), std::abs(my[k] - ty[k])});
    m.push_back({"max_marginal_moment_error", worst, 1e-5});
    m.push_back({"imaginary_residue", grid.diagnostics.imaginary_residue, 1e-10});
  });
}

/// 9. Propagator against the h-Fourier transform, width law, Wigner mass and uncertainty.
inline SuiteResult suite_quantum_reference(const VerifyOptions& = {}) {
  return detail::timed(9, "quantum-reference", 30.0, [&](std::vector<Metric>& m) {
    constexpr double h = 0.02;
    const auto phi = phi_h(2.0, 0.3, -0.2, h);
    std::vector<double> ps;
    for (int k = -60; k <= 60; ++k) ps.push_back(-0.2 + 0.005 * k);
    const auto prop = propagate_values(phi, ps, 0.5 * std::numbers::pi, h);
    const auto ft = h_fourier(phi, ps, h);
    double linf = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) linf = std::max(linf, std::abs(prop[i] - ft[i]));
    m.push_back({"fourier_linf", linf, 1e-8});

    double worst_width = 0.0;
    for (double t : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
      const auto out = propagate(phi_h(2.0, 0.0, 0.0, h), t, h);
      const auto dens = numeric_density_moments(out);
      const double lambda_numeric = 0.5 * h / dens[2];
      worst_width = std::max(worst_width, std::abs(lambda_numeric - gaussian_evolution_params(0, 0, 2.0, t).lambda_t));
    }
    m.push_back({"max_width_error", worst_width, 1e-6});

    const CoherentState cs{0.4, -0.3, 1.7, 0.05};
    const auto w = wigner_moments(cs);
    m.push_back({"wigner_mass_error", std::abs(w.mass - 1.0), 1e-10});
    m.push_back({"uncertainty_product_error",
                 std::abs(w.uncertainty_product() - 0.25 * cs.hbar * cs.hbar) / (0.25 * cs.hbar * cs.hbar), 1e-10});
  });
}

using SuiteFn = std::function<SuiteResult(const VerifyOptions&)>;

inline std::vector<SuiteFn> core_suites() {
  return {suite_exact_identities,    suite_coefficients,           suite_cumulant_derivatives,
          suite_monte_carlo,         suite_duality,                suite_homotopy,
          suite_gaussian_tomography, suite_non_gaussian_tomography, suite_quantum_reference};
}

/// 10. Repeat runs agree byte for byte; thread counts agree to 1e-12.
inline SuiteResult suite_determinism(const VerifyOptions& opt = {}) {
  return detail::timed(10, "determinism", 600.0, [&](std::vector<Metric>& m) {
    double differing = 0.0;
    for (const auto& suite : core_suites())
      if (suite(opt).fingerprint() != suite(opt).fingerprint()) differing += 1;
    m.push_back({"suites_differing_between_runs", differing, 0.0});

    SamplerConfig cfg;
    cfg.seed = opt.seed;
    cfg.sweeps = 20000;
    cfg.n_particles = 100;
    cfg.threads = 1;
    const auto one = sample_energies(cfg);
    cfg.threads = 4;
    const auto four = sample_energies(cfg);
    m.push_back({"sampler_thread_mismatches",
                 static_cast<double>(one.quanta == four.quanta ? 0 : 1), 0.0});

    double worst = 0.0;
    const auto g1 = non_gaussian_reconstruction(1), g4 = non_gaussian_reconstruction(4);
    for (std::size_t i = 0; i < g1.values.size(); ++i) worst = std::max(worst, std::abs(g1.values[i] - g4.values[i]));
    m.push_back({"reconstruction_thread_difference", worst, 1e-12});
  });
}

inline std::vector<SuiteFn> all_suites() {
  auto s = core_suites();
  s.push_back(suite_determinism);
  return s;
}

}  // namespace thermoflux

#endif  // THERMOFLUX_VERIFY_HPP
