#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "thermoflux/quantum_reference.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double kPi = std::numbers::pi;

TEST_CASE("coherent-state Wigner function") {
  const CoherentState s{0.2, -0.7, 1.5, 0.3};
  CHECK(wigner_coherent(s, 0.2, -0.7) == 2.0);
  const auto m = wigner_moments(s);
  CHECK_THAT(m.mass, WithinAbs(1.0, 1e-12));
  CHECK_THAT(m.mean_q, WithinAbs(-0.7, 1e-13));
  CHECK_THAT(m.variance_q, WithinRel(0.3 / 1.5, 1e-12));
  CHECK_THAT(m.variance_p, WithinRel(1.5 * 0.3 / 4, 1e-12));
  CHECK_THAT(m.uncertainty_product(), WithinRel(0.3 * 0.3 / 4, 1e-12));
}

TEST_CASE("coherent wavefunction has unit norm") {
  const CoherentState s{1.0, 0.5, 2.0, 0.1};
  double acc = 0.0;
  const int n = 20001;
  const double dx = 10.0 / (n - 1);
  for (int i = 0; i < n; ++i) acc += std::norm(coherent_wavefunction(s, -4.5 + i * dx)) * dx;
  CHECK_THAT(acc, WithinAbs(1.0, 1e-12));
}

TEST_CASE("Gaussian evolution parameters") {
  const auto e0 = gaussian_evolution_params(0.4, -1.0, 3.0, 0.0);
  CHECK(e0.c_t == 0.4);
  CHECK_THAT(e0.lambda_t, WithinRel(3.0, 1e-15));
  const auto e1 = gaussian_evolution_params(0.4, -1.0, 2.0, kPi / 2);
  CHECK_THAT(e1.c_t, WithinRel(-1.0, 1e-15));
  CHECK_THAT(e1.lambda_t, WithinRel(0.5, 1e-15));
  CHECK_THAT(gaussian_evolution_params(1.0, 1.0, 2.0, kPi / 4).c_t, WithinRel(std::sqrt(2.0), 1e-15));
  CHECK_THAT(gaussian_evolution_params(0.0, 0.0, 2.0, kPi / 4).lambda_t, WithinRel(0.8, 1e-15));
}

TEST_CASE("propagation at pi/2 is the h-Fourier transform") {
  const double h = 0.05;
  const auto phi = phi_h(0.7, -0.2, 0.4, h);
  std::vector<double> ps;
  for (int k = -30; k <= 30; ++k) ps.push_back(0.4 + 0.02 * k);
  const auto a = propagate_values(phi, ps, kPi / 2, h);
  const auto b = h_fourier(phi, ps, h);
  for (std::size_t i = 0; i < ps.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("propagation preserves the norm and follows the width law") {
  const double h = 0.02;
  const auto phi = phi_h(2.0, 0.3, -0.5, h);
  CHECK_THAT(phi.norm2(), WithinRel(1.0, 1e-14));
  for (double t : {0.3, kPi / 4, 1.2, 2.5, -0.8}) {
    const auto out = propagate(phi, t, h);
    const auto ev = gaussian_evolution_params(0.3, -0.5, 2.0, t);
    CHECK_THAT(numeric_density_moments(out)[0], WithinRel(1.0, 1e-10));
    CHECK_THAT(out.width(h), WithinRel(ev.lambda_t, 1e-9));
    CHECK_THAT(out.mean(), WithinAbs(ev.c_t, 1e-9));
  }
}

TEST_CASE("unit width is invariant and widths compose") {
  const double h = 0.1;
  for (double t : {0.2, 1.0, 2.0}) CHECK_THAT(propagate(phi_h(1.0, 0.0, 0.0, h), t, h).width(h), WithinRel(1.0, 1e-12));
  const auto two = propagate(propagate(phi_h(3.0, 0.0, 0.0, h), 0.5, h), 0.9, h);
  CHECK_THAT(two.width(h), WithinRel(gaussian_evolution_params(0, 0, 3.0, 1.4).lambda_t, 1e-9));
}

TEST_CASE("propagator is singular at multiples of pi") {
  const auto phi = phi_h(1.0, 0.0, 0.0, 0.1);
  CHECK_THROWS_AS(propagate(phi, 0.0, 0.1), SingularTime);
  CHECK_THROWS_AS(propagate_values(phi, {0.0}, kPi, 0.1), SingularTime);
  CHECK_THROWS_AS(phi_h(-1.0, 0.0, 0.0, 0.1), DomainError);
}
