#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "thermoflux/quadrature.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Gauss-Hermite integrates e^{-x^2} polynomials exactly") {
  const auto r = gauss_hermite(20);
  const double sp = std::sqrt(std::numbers::pi);
  CHECK_THAT(r.integrate([](double) { return 1.0; }), WithinRel(sp, 1e-14));
  CHECK_THAT(r.integrate([](double x) { return x * x; }), WithinRel(sp / 2, 1e-14));
  CHECK_THAT(r.integrate([](double x) { return std::pow(x, 10); }), WithinRel(945.0 / 32.0 * sp, 1e-13));
  CHECK_THAT(gauss_hermite(128).integrate([](double x) { return x * x; }), WithinRel(sp / 2, 1e-13));
}

TEST_CASE("Gauss-Legendre on [-1, 1]") {
  const auto r = gauss_legendre(12);
  CHECK_THAT(r.integrate([](double x) { return std::pow(x, 22); }), WithinRel(2.0 / 23.0, 1e-14));
  CHECK_THAT(r.integrate([](double x) { return std::cos(x); }), WithinRel(2 * std::sin(1.0), 1e-14));
}

TEST_CASE("half-range rule for u e^{-u^2} on [0, inf)") {
  const auto r = half_range_rule(48);
  // int_0^inf u^{k+1} e^{-u^2} du = Gamma(k/2 + 1) / 2
  for (int k = 0; k <= 20; ++k)
    CHECK_THAT(r.integrate([&](double u) { return std::pow(u, k); }), WithinRel(0.5 * std::tgamma(0.5 * k + 1.0), 1e-12));
  for (double x : r.nodes) CHECK(x > 0.0);
}
