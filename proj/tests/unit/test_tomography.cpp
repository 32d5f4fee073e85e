#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "thermoflux/tomography.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Gram-Charlier tomogram reproduces its target moments") {
  const auto k = fluctuation_cumulants(1.0, 1.0, 10.0, 6);
  for (int n0 : {2, 4, 6}) {
    const Tomogram t(k, n0);
    const auto m = t.quadrature_moments(n0);
    for (int n = 0; n <= n0; ++n) CHECK_THAT(m[n], WithinAbs(t.target_moments()[n], 1e-14));
  }
  CHECK_THROWS_AS(Tomogram(k, 9), DomainError);
}

TEST_CASE("Hermite polynomials") {
  CHECK(detail::hermite_he(4, 2.0) == 16.0 - 24.0 + 3.0);
  const auto c = detail::hermite_he_coefficients(4);
  CHECK(c[4][4] == 1.0);
  CHECK(c[4][2] == -6.0);
  CHECK(c[4][0] == 3.0);
}

TEST_CASE("tomogram homogeneity in (mu, nu)") {
  const auto k = fluctuation_cumulants(1.0, 1.0, 10.0, 4);
  const double t = 0.6;
  const Tomogram tomo(k, 4, t);
  const double lam = -2.5;
  CHECK_THAT(tomo.density(0.3, lam * std::cos(t), lam * std::sin(t)), WithinRel(tomo.density(0.3 / lam) / 2.5, 1e-14));
  CHECK_THROWS_AS(tomo.density(0.3, 1.0, 1.0), DomainError);
}

TEST_CASE("characteristic function is the Fourier transform of the density") {
  const auto k = fluctuation_cumulants(1.0, 1.0, 5.0, 4);
  const Tomogram tomo(k, 4);
  const double s = std::sqrt(tomo.variance());
  for (double kk : {0.0, 0.5 / s, 2.0 / s}) {
    std::complex<double> acc = 0.0;
    const int n = 4001;
    const double dz = 24.0 * s / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double z = -12.0 * s + i * dz;
      acc += std::exp(std::complex<double>(0.0, kk * z)) * tomo.density(z) * dz;
    }
    CHECK(std::abs(acc - tomo.characteristic(kk)) < 1e-12);
  }
}

TEST_CASE("consistent cumulant forms pin the endpoints") {
  const auto path = HomotopyPath::from_system(1.0, 1.0, 100.0);
  const auto forms = fit_cumulant_forms(path, 4);
  const auto k0 = path_cumulants(path, 0.0, 4), k1 = path_cumulants(path, 0.5 * std::numbers::pi, 4);
  for (int n = 2; n <= 4; ++n) {
    CHECK_THAT(forms.at(0.0)(n), WithinRel(k0(n), 1e-14));
    CHECK_THAT(forms.at(0.5 * std::numbers::pi)(n), WithinRel(k1(n), 1e-12));
    // antipodal rule kappa_n(t + pi) = (-1)^n kappa_n(t)
    CHECK_THAT(forms.at(0.3 + std::numbers::pi)(n), WithinRel((n % 2 ? -1 : 1) * forms.at(0.3)(n), 1e-12));
  }
  CHECK(forms.projection_residual < 0.1);
}

TEST_CASE("raw family is antipodally consistent near pi") {
  const auto path = HomotopyPath::from_system(1.0, 1.0, 100.0);
  const auto k0 = path_cumulants(path, 1e-9, 4);
  const auto kpi = tomogram_cumulants(path, std::numbers::pi - 1e-9, 4);
  CHECK_THAT(kpi(2), WithinRel(k0(2), 1e-7));
  CHECK_THAT(kpi(3), WithinRel(-k0(3), 1e-6));
  CHECK_THAT(kpi(4), WithinRel(k0(4), 1e-6));
  CHECK_THROWS_AS(tomogram_cumulants(path, std::numbers::pi, 4), DomainError);
}

TEST_CASE("Gaussian round trip reproduces the closed-form limit") {
  const auto alpha = ManifoldPoint::from_beta(1.0, 1.0);
  const auto fl = quasi_fluctuations(alpha, 100.0);
  const auto spec = GridSpec::for_variances(fl.variance_eps(), fl.variance_beta(), 21, 21);
  const auto grid = reconstruct(gaussian_tomograms(fl.variance_eps(), fl.variance_beta(), 48), 0.02, spec, {64, 2, 1e-6});
  const auto exact = gaussian_limit(alpha, 100.0, spec);
  for (std::size_t i = 0; i < grid.values.size(); ++i) CHECK_THAT(grid.values[i], WithinAbs(exact.values[i], 1e-8));
  CHECK_THAT(exact.at(10, 10), WithinRel(100.0 / (2 * std::numbers::pi), 1e-14));
  CHECK_THAT(purity(grid), WithinAbs(1.0, 1e-3));
}

TEST_CASE("reconstruction preconditions") {
  const auto family = gaussian_tomograms(1.0, 1.0, 16);
  CHECK_THROWS_AS(reconstruct(family, 0.1, GridSpec{}), DomainError);
  const auto ok = gaussian_tomograms(1.0, 1.0, 32);
  CHECK_THROWS_AS(reconstruct(ok, -1.0, GridSpec{}), DomainError);
  const auto narrow = gaussian_grid(1.0, 1.0, 1.0, GridSpec::centered(1.0, 1.0, 11, 11));
  CHECK_THROWS_AS(purity(narrow), GridTooSmall);
}

TEST_CASE("grid CSV layout") {
  const auto g = gaussian_grid(1.0, 1.0, 1.0, GridSpec::centered(1.0, 1.0, 2, 3));
  std::ostringstream os;
  write_grid_csv(os, g);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
}
