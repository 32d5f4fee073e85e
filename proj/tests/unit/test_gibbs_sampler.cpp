#include <catch_amalgamated.hpp>

#include <sstream>

#include "thermoflux/cumulant_algebra.hpp"
#include "thermoflux/gibbs_sampler.hpp"

using namespace thermoflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
SamplerConfig config(unsigned threads) {
  SamplerConfig c;
  c.seed = 2024;
  c.sweeps = 5000;
  c.n_particles = 20;
  c.a = 0.5;
  c.beta = 1.5;
  c.threads = threads;
  return c;
}
}  // namespace

TEST_CASE("sampling is reproducible and independent of the thread count") {
  const auto a = sample_energies(config(1));
  const auto b = sample_energies(config(1));
  const auto c = sample_energies(config(5));
  CHECK(a.quanta == b.quanta);
  CHECK(a.quanta == c.quanta);
  auto other = config(1);
  other.seed = 2025;
  CHECK(sample_energies(other).quanta != a.quanta);
}

TEST_CASE("splitmix64 reference values") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(open_uniform(0) > 0.0);
  CHECK(open_uniform(~0ull) < 1.0);
}

TEST_CASE("k-statistics of a small data set") {
  std::vector<double> x;
  for (int i = 0; i < 200; ++i) x.push_back(static_cast<double>((i * 37) % 11));
  // direct unbiased estimators
  const double n = static_cast<double>(x.size());
  double m = 0;
  for (double v : x) m += v;
  m /= n;
  double s2 = 0, s3 = 0, s4 = 0;
  for (double v : x) {
    const double d = v - m;
    s2 += d * d;
    s3 += d * d * d;
    s4 += d * d * d * d;
  }
  const double k2 = s2 / (n - 1);
  const double k3 = n * s3 / ((n - 1) * (n - 2));
  const double k4 = n * ((n + 1) * s4 - 3 * (n - 1) * s2 * s2 / n) / ((n - 1) * (n - 2) * (n - 3));
  const auto est = empirical_cumulants(x, 4);
  CHECK_THAT(est.estimates[0], WithinRel(m, 1e-14));
  CHECK_THAT(est.estimates[1], WithinRel(k2, 1e-12));
  CHECK_THAT(est.estimates[2], WithinAbs(k3, 1e-10));
  CHECK_THAT(est.estimates[3], WithinRel(k4, 1e-10));
  for (double se : est.standard_errors) CHECK(se > 0.0);
}

TEST_CASE("sampled cumulants agree with the exact ones") {
  auto cfg = config(0);
  cfg.sweeps = 50000;
  const auto est = empirical_cumulants(sample_energies(cfg), 4);
  const auto exact = energy_cumulants(cfg.beta, cfg.a, 20.0, 4);
  for (int n = 1; n <= 4; ++n)
    CHECK(std::abs(est.estimates[n - 1] - exact(n)) < 5.0 * est.standard_errors[n - 1]);
}

TEST_CASE("sampler preconditions") {
  CHECK_THROWS_AS(empirical_cumulants(std::vector<double>(99, 1.0)), InsufficientSamples);
  auto cfg = config(1);
  cfg.beta = -1.0;
  CHECK_THROWS_AS(sample_energies(cfg), DivergentPartition);
}

TEST_CASE("samples CSV has a header and one energy per line") {
  auto cfg = config(1);
  cfg.sweeps = 3;
  std::ostringstream os;
  write_samples_csv(os, sample_energies(cfg));
  std::string line;
  std::istringstream in(os.str());
  int lines = 0;
  std::getline(in, line);
  CHECK(line == "energy");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 3);
}
