#include <catch_amalgamated.hpp>

#include "thermoflux/cumulant_algebra.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("c(n, m) table has the expected small entries") {
  const CoefficientTable c(5);
  CHECK(c(1, 1) == 1);
  CHECK(c(3, 2) == 3);
  CHECK(c(3, 3) == 2);
  CHECK(c(4, 2) == 7);
  CHECK(c(4, 3) == 12);
  CHECK(c(4, 4) == 6);
  CHECK(c(5, 5) == 24);
  CHECK_THROWS_AS(c(2, 3), DomainError);
}

TEST_CASE("recurrence, explicit formula and Stirling numbers agree") {
  const CoefficientTable c(20);
  for (int n = 1; n <= 20; ++n)
    for (int m = 1; m <= n; ++m) {
      CHECK(c(n, m) == c_explicit(n, m));
      CHECK(c(n, m) == detail::checked_mul(factorial(m - 1), stirling2(n, m)));
    }
  CHECK(to_string(c(20, 20)) == "121645100408832000");
  CHECK_THROWS_AS(CoefficientTable(21), OrderTooLarge);
}

TEST_CASE("Bernoulli numbers with B1 = +1/2") {
  const auto b = bernoulli_numbers(12);
  CHECK(b[0] == Rational{1, 1});
  CHECK(b[1] == Rational{1, 2});
  CHECK(b[2] == Rational{1, 6});
  CHECK(b[3] == Rational{0, 1});
  CHECK(b[4] == Rational{-1, 30});
  CHECK(b[12] == Rational{-691, 2730});
}

TEST_CASE("power sums three ways") {
  CHECK(power_sum_check(3, 10).direct == 3025);
  for (int m = 1; m <= 10; ++m)
    for (int n : {1, 2, 7, 100, 1000}) CHECK(power_sum_check(m, n).agree());
  CHECK_THROWS_AS(power_sum_check(3, 1001), OrderTooLarge);
}

TEST_CASE("energy cumulants match high-precision oracles") {
  const auto k = energy_cumulants(1.0, 1.0, 1.0, 5);
  CHECK_THAT(k(1), WithinRel(0.581976706869326424, 1e-15));
  CHECK_THAT(k(2), WithinRel(0.920673594207792319, 1e-15));
  CHECK_THAT(k(3), WithinRel(1.992294767124987, 1e-14));
  CHECK_THAT(k(4), WithinRel(6.006512796636760, 1e-14));
  CHECK_THAT(k(5), WithinRel(24.003332974769052, 1e-14));
}

TEST_CASE("fluctuation cumulants scale as K_n / N^n") {
  const auto k = fluctuation_cumulants(1.0, 1.0, 100.0, 4);
  CHECK(k(1) == 0.0);
  CHECK_THAT(k(2), WithinRel(0.920673594207792319e-2, 1e-14));
  CHECK_THAT(k(3), WithinRel(1.992294767124987e-4, 1e-14));
  CHECK_THAT(k(4), WithinRel(6.006512796636760e-6, 1e-14));
}

TEST_CASE("cumulants agree with Richardson differences of log Z") {
  for (double beta : {0.3, 1.0, 2.5}) {
    const auto k = energy_cumulants(beta, 0.9, 17.0, 6);
    for (int n = 1; n <= 6; ++n)
      CHECK_THAT(log_partition_derivative(beta, 0.9, 17.0, n), WithinRel(k(n), 1e-6));
  }
}

TEST_CASE("moments and cumulants round-trip") {
  const auto k = energy_cumulants(0.7, 1.1, 3.0, 6);
  const auto mom = cumulants_to_moments(k);
  const auto back = moments_to_cumulants(mom.raw, CumulantKind::energy);
  for (int n = 1; n <= 6; ++n) CHECK_THAT(back(n), WithinRel(k(n), 1e-10));
  // Gaussian: raw moments of N(0, 2)
  const auto g = cumulants_to_moments({CumulantKind::fluctuation, {0.0, 2.0, 0.0, 0.0}});
  CHECK_THAT(g.raw[4], WithinRel(12.0, 1e-15));
  CHECK_THAT(g.central[2], WithinRel(2.0, 1e-15));
}
