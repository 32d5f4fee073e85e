#include <catch_amalgamated.hpp>

#include <cmath>

#include "thermoflux/core_thermo.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("single-oscillator oracles at beta = a = 1") {
  const OscillatorEnsemble ens(1.0, 1.0);
  const ThermoState state{1.0, BetaSource::thermostat};
  CHECK_THAT(log_partition(state, ens), WithinRel(0.458675145387081891, 1e-15));
  const auto st = energy_stats(state, ens);
  CHECK_THAT(st.mean, WithinRel(0.581976706869326424, 1e-15));
  CHECK_THAT(st.variance, WithinRel(0.920673594207792319, 1e-15));
}

TEST_CASE("log Z is extensive in N") {
  const ThermoState state{2.0, BetaSource::thermostat};
  CHECK_THAT(log_partition(state, OscillatorEnsemble(0.5, 3.0)), WithinRel(1.37602543616124567, 1e-14));
}

TEST_CASE("strict evaluation rejects a divergent partition sum") {
  CHECK_THROWS_AS(energy_stats(-1.0, 1.0, 1.0), DivergentPartition);
  CHECK_THROWS_AS(energy_stats(0.0, 1.0, 1.0), DivergentPartition);
  CHECK_THROWS_AS(OscillatorEnsemble(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(OscillatorEnsemble(1.0, 0.0), DomainError);
}

TEST_CASE("formal evaluation continues the closed forms to beta a < 0") {
  const auto st = energy_stats(1.0, -1.0, 1.0, Evaluation::formal);
  // a/(e^{-1} - 1) and a^2 e^{-1}/(e^{-1}-1)^2
  CHECK_THAT(st.mean, WithinRel(1.581976706869326424, 1e-14));
  CHECK_THAT(st.variance, WithinRel(0.920673594207792319, 1e-14));
  CHECK(OscillatorEnsemble::formal(-1.0, 1.0).unphysical_spectrum());
}

TEST_CASE("specific entropy derivatives match finite differences") {
  for (double eps : {0.05, 0.7, 3.0, 40.0}) {
    const double a = 1.3;
    const double h = 1e-4 * eps;
    const auto c = specific_entropy(eps, a);
    const double d1 = (specific_entropy(eps + h, a).s - specific_entropy(eps - h, a).s) / (2 * h);
    const double d2 = (specific_entropy(eps + h, a).s - 2 * c.s + specific_entropy(eps - h, a).s) / (h * h);
    CHECK_THAT(c.ds, WithinRel(d1, 1e-8));
    CHECK_THAT(c.d2s, WithinRel(d2, 1e-5));
  }
  CHECK_THAT(specific_entropy(1.0, 1.0).s, WithinRel(1.386294361119890619, 1e-15));
  CHECK_THROWS_AS(specific_entropy(0.0, 1.0), DomainError);
}

TEST_CASE("manifold maps beta <-> eps are mutually inverse") {
  for (double a : {0.01, 0.3, 1.0, 7.0, 100.0})
    for (double eps : {0.01, 0.2, 1.0, 9.0, 100.0}) {
      const auto p = ManifoldPoint::from_energy(eps, a);
      const auto q = ManifoldPoint::from_beta(p.beta(), a);
      CHECK_THAT(q.epsilon(), WithinRel(eps, 1e-12));
      CHECK_THAT(q.lambda(), WithinRel(p.lambda(), 1e-12));
    }
}

TEST_CASE("Legendre transform curvature is the inverse of lambda") {
  for (double beta : {0.1, 1.0, 4.0}) {
    const auto phi = legendre_phi({beta, BetaSource::thermostat}, 0.8);
    CHECK_THAT(phi.d2phi * ManifoldPoint::from_beta(beta, 0.8).lambda(), WithinRel(1.0, 1e-12));
  }
}

TEST_CASE("entropy is first-degree homogeneous") {
  const double s1 = entropy_stat(OscillatorEnsemble(1.0, 10.0), 7.0);
  const double s3 = entropy_stat(OscillatorEnsemble(1.0, 30.0), 21.0);
  CHECK_THAT(s3, WithinRel(3.0 * s1, 1e-14));
}

TEST_CASE("quasithermodynamic fluctuations are reciprocal") {
  const auto alpha = ManifoldPoint::from_beta(1.0, 1.0);
  const auto fl = quasi_fluctuations(alpha, 100.0);
  CHECK_THAT(fl.variance_eps() * fl.variance_beta(), WithinRel(1e-4, 1e-14));
  CHECK_THAT(fl.variance_eps(), WithinRel(0.00920673594207792319, 1e-13));
  CHECK_THAT(fl.density_eps(0.0), WithinRel(1.0 / std::sqrt(2 * M_PI * fl.variance_eps()), 1e-14));
}
