#include <catch_amalgamated.hpp>

#include <cmath>

#include "thermoflux/duality.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("varphi values and inverse") {
  CHECK_THAT(varphi(1.0), WithinRel(1.581976706869326, 1e-14));
  CHECK_THAT(varphi(-1.0), WithinRel(0.581976706869326, 1e-14));
  CHECK(varphi(0.0) == 1.0);
  for (double y : {-20.0, -3.0, -0.4, -1e-6}) CHECK_THAT(detail::solve_varphi(varphi(y)), WithinAbs(y, 1e-11));
  CHECK_THROWS_AS(detail::solve_varphi(1.5), NoBracket);
}

TEST_CASE("log sinhc is accurate across scales") {
  CHECK_THAT(detail::log_sinhc(1e-4), WithinRel(1e-8 / 6.0, 1e-7));
  CHECK_THAT(detail::log_sinhc(0.5), WithinRel(std::log(std::sinh(0.5) / 0.5), 1e-14));
  CHECK_THAT(detail::log_sinhc(50.0), WithinRel(50.0 - std::log(100.0), 1e-14));
}

TEST_CASE("symmetric dual at beta = a = 1") {
  const auto p = solve_symmetric(1.0, 1.0, 100.0);
  CHECK_THAT(p.dual.beta * p.dual.a, WithinAbs(-0.856576273424530559, 1e-13));
  CHECK_THAT(p.dual.beta, WithinRel(0.930799054555520240, 1e-13));
  CHECK_THAT(p.dual.a, WithinRel(-0.920259071205833024, 1e-13));
  CHECK(p.unphysical_spectrum);
  CHECK(p.sign_law_holds);
  const auto rep = verify_duality(p);
  CHECK_THAT(rep.scaled_variance_product, WithinRel(1.0, 1e-13));
  CHECK_THAT(rep.imposed_condition_residual, WithinAbs(0.0, 1e-14));
}

TEST_CASE("remark1 dual at beta = a = 1") {
  const auto p = solve_remark1(1.0, 1.0, 100.0);
  CHECK_THAT(p.dual.beta * p.dual.a, WithinRel(0.0826497092258362180, 1e-14));
  CHECK_THAT(p.dual.a, WithinRel(0.0861612696304875570, 1e-14));
  CHECK_THAT(p.dual.beta, WithinRel(0.959244328458586245, 1e-14));
  CHECK_FALSE(p.unphysical_spectrum);
  const auto rep = verify_duality(p);
  CHECK_THAT(rep.mean_eps_dual, WithinRel(1.0, 1e-14));
  CHECK_THAT(rep.scaled_variance_product, WithinRel(1.0, 1e-13));
}

TEST_CASE("duality input validation") {
  CHECK_THROWS_AS(solve_dual(-1.0, 1.0, 1.0, DualVariant::remark1), DomainError);
  CHECK_THROWS_AS(solve_dual(1.0, 0.0, 1.0, DualVariant::symmetric), DomainError);
  CHECK_THROWS_AS(solve_dual(1.0, 1.0, 0.0, DualVariant::symmetric), DomainError);
}

TEST_CASE("extreme beta a stays finite") {
  for (double x : {1e-6, 1e-3, 30.0, 200.0})
    for (auto v : {DualVariant::symmetric, DualVariant::remark1}) {
      const auto p = solve_dual(1.0, x, 10.0, v);
      CHECK(std::isfinite(p.dual.a));
      CHECK(std::isfinite(p.dual.beta));
    }
}
