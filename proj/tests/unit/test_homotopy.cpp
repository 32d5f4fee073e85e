#include <catch_amalgamated.hpp>

#include <numbers>

#include "thermoflux/homotopy.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("homotopy endpoints recover the system and its dual") {
  const auto pair = solve_remark1(1.0, 1.0, 100.0);
  const auto path = HomotopyPath::from_dual(pair);
  const auto p0 = path_params(path, 0.0);
  const auto p1 = path_params(path, 0.5 * std::numbers::pi);
  CHECK_THAT(p0.a, WithinRel(1.0, 1e-13));
  CHECK_THAT(p0.beta, WithinRel(1.0, 1e-13));
  CHECK_THAT(p1.a, WithinRel(pair.dual.a, 1e-12));
  CHECK_THAT(p1.beta, WithinRel(pair.dual.beta, 1e-12));
}

TEST_CASE("midpoint of the remark1 path is formal") {
  const auto path = HomotopyPath::from_system(1.0, 1.0, 100.0);
  const auto p = path_params(path, 0.25 * std::numbers::pi);
  CHECK_THAT(p.a, WithinRel(-0.221617964642709265, 1e-12));
  CHECK_THAT(p.beta, WithinRel(0.996270788794683044, 1e-12));
  CHECK(p.formal);
}

TEST_CASE("kappa_2 interpolates the endpoint variances") {
  const auto path = HomotopyPath::from_system(0.7, 2.0, 30.0, DualVariant::symmetric);
  for (double t : {0.1, 0.5, 1.0, 1.4}) {
    const auto k = path_cumulants(path, t, 4);
    CHECK(k(1) == 0.0);
    CHECK_THAT(k(2), WithinRel(path.variance_at(t), 1e-12));
  }
}

TEST_CASE("N enters only through N v_t") {
  const auto path = HomotopyPath::from_system(1.0, 1.0, 100.0);
  const auto scaled = path.rescaled(4.0);
  for (double t : {0.0, 0.3, 1.2}) {
    const auto a = path_params(path, t), b = path_params(scaled, t);
    CHECK(a.a == b.a);
    CHECK(a.beta == b.beta);
  }
}

TEST_CASE("degenerate homotopy points are rejected") {
  const HomotopyPath path(1.0, 0.01, 1.0, 0.01, 100.0);  // N v = eps^2 at t = 0
  CHECK_THROWS_AS(path_params(path, 0.0), DegeneratePoint);
  const HomotopyPath negative(1.0, 0.01, -2.0, 0.01, 10.0);
  CHECK_THROWS_AS(path_params(negative, 1.5), DegeneratePoint);
  CHECK_THROWS_AS(HomotopyPath(1.0, -1.0, 1.0, 1.0, 1.0), DomainError);
}
