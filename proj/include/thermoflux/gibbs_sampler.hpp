#ifndef THERMOFLUX_GIBBS_SAMPLER_HPP
#define THERMOFLUX_GIBBS_SAMPLER_HPP

// Monte-Carlo sampling of the canonical oscillator ensemble.
//
// Each oscillator occupation is geometric, P(n) = (1 - q) q^n with
// q = exp(-beta a), drawn by inversion n = floor(log U / log q) from a uniform
// U in (0, 1). Uniforms come from std::mt19937_64 as ((x >> 12) + 0.5) 2^-52,
// so any backend reproducing that stream reproduces the samples.
//
// Sweeps are split into fixed chunks of kSweepsPerChunk; chunk c draws from a
// generator seeded with splitmix64(seed + (c + 1) * golden). The chunk layout
// never depends on the thread count, so the output is identical for any
// number of worker threads.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "thermoflux/core_thermo.hpp"
#include "thermoflux/errors.hpp"

namespace thermoflux {

inline constexpr std::size_t kSweepsPerChunk = 1024;

/// Worker count from THERMOFLUX_THREADS, else hardware concurrency (>= 1).
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("THERMOFLUX_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items must
/// write disjoint outputs.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(seed + (chunk + 1) * 0x9E3779B97F4A7C15ull);
}

inline double open_uniform(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

struct SamplerConfig {
  std::uint64_t seed = 42;
  std::size_t sweeps = 100000;
  double a = 1.0;
  std::uint64_t n_particles = 1;
  double beta = 1.0;
  unsigned threads = 0;  // 0: default_thread_count()
};

/// A run of i.i.d. total energies; each energy is a times a quanta count.
struct SampleRun {
  std::uint64_t seed = 0;
  std::size_t sweeps = 0;
  double a = 1.0;
  std::uint64_t n_particles = 1;
  ThermoState state;
  std::vector<std::uint64_t> quanta;

  double energy(std::size_t i) const { return a * static_cast<double>(quanta[i]); }
  std::vector<double> energies() const {
    std::vector<double> out(quanta.size());
    for (std::size_t i = 0; i < quanta.size(); ++i) out[i] = energy(i);
    return out;
  }
};

inline SampleRun sample_energies(const SamplerConfig& cfg) {
  OscillatorEnsemble ens(cfg.a, static_cast<double>(cfg.n_particles));
  const double x = detail::checked_beta_a(cfg.beta, cfg.a, Evaluation::strict);
  if (cfg.n_particles < 1 || cfg.sweeps < 1)
    throw DomainError("sample_energies requires N >= 1 and sweeps >= 1");
  const double log_q = -x;

  SampleRun run{cfg.seed, cfg.sweeps, ens.a(), cfg.n_particles, {cfg.beta, BetaSource::thermostat}, {}};
  run.quanta.assign(cfg.sweeps, 0);
  const std::size_t chunks = (cfg.sweeps + kSweepsPerChunk - 1) / kSweepsPerChunk;
  parallel_for(chunks, cfg.threads ? cfg.threads : default_thread_count(), [&](std::size_t c) {
    std::mt19937_64 gen(chunk_seed(cfg.seed, c));
    const std::size_t lo = c * kSweepsPerChunk;
    const std::size_t hi = std::min(cfg.sweeps, lo + kSweepsPerChunk);
    for (std::size_t s = lo; s < hi; ++s) {
      std::uint64_t total = 0;
      for (std::uint64_t p = 0; p < cfg.n_particles; ++p) {
        const double u = open_uniform(gen());
        total += static_cast<std::uint64_t>(std::floor(std::log(u) / log_q));
      }
      run.quanta[s] = total;
    }
  });
  return run;
}

struct EmpiricalCumulants {
  std::vector<double> estimates;        // k_1..k_order
  std::vector<double> standard_errors;  // jackknife
};

namespace detail {

/// Unbiased k-statistics k_1..k_4 from power sums of n values.
inline std::array<long double, 4> k_statistics(long double n, long double s1, long double s2,
                                               long double s3, long double s4) {
  const long double k1 = s1 / n;
  const long double k2 = (n * s2 - s1 * s1) / (n * (n - 1));
  const long double k3 = (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2));
  const long double k4 = (-6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
                          4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4) /
                         (n * (n - 1) * (n - 2) * (n - 3));
  return {k1, k2, k3, k4};
}

}  // namespace detail

/// Unbiased k-statistics of the total energy with leave-one-out jackknife errors.
inline EmpiricalCumulants empirical_cumulants(const std::vector<double>& samples, int order = 4) {
  if (order < 1 || order > 4) throw DomainError("empirical_cumulants supports order 1..4");
  if (samples.size() < 100)
    throw InsufficientSamples("need at least 100 samples, got " + std::to_string(samples.size()));
  const std::size_t m = samples.size();
  // k_2..k_4 are shift invariant; centring on the sample mean keeps the power sums small.
  long double shift = 0.0L;
  for (double v : samples) shift += v;
  shift /= static_cast<long double>(m);

  std::array<long double, 4> s{};
  for (double v : samples) {
    const long double d = v - shift;
    s[0] += d;
    s[1] += d * d;
    s[2] += d * d * d;
    s[3] += d * d * d * d;
  }
  const long double n = static_cast<long double>(m);
  const auto full = detail::k_statistics(n, s[0], s[1], s[2], s[3]);

  std::array<long double, 4> mean_loo{}, sq_loo{};
  std::vector<std::array<long double, 4>> loo(m);
  for (std::size_t i = 0; i < m; ++i) {
    const long double d = samples[i] - shift;
    loo[i] = detail::k_statistics(n - 1, s[0] - d, s[1] - d * d, s[2] - d * d * d, s[3] - d * d * d * d);
    for (int r = 0; r < 4; ++r) mean_loo[static_cast<std::size_t>(r)] += loo[i][static_cast<std::size_t>(r)];
  }
  for (auto& v : mean_loo) v /= n;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < 4; ++r) {
      const long double dev = loo[i][r] - mean_loo[r];
      sq_loo[r] += dev * dev;
    }

  EmpiricalCumulants out;
  for (int r = 0; r < order; ++r) {
    const auto ri = static_cast<std::size_t>(r);
    out.estimates.push_back(static_cast<double>(r == 0 ? full[0] + shift : full[ri]));
    out.standard_errors.push_back(static_cast<double>(std::sqrt((n - 1) / n * sq_loo[ri])));
  }
  return out;
}

inline EmpiricalCumulants empirical_cumulants(const SampleRun& run, int order = 4) {
  return empirical_cumulants(run.energies(), order);
}

/// CSV with a header row and one total energy per line.
inline void write_samples_csv(std::ostream& os, const SampleRun& run) {
  os << "energy\n";
  char buf[64];
  for (std::size_t i = 0; i < run.quanta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", run.energy(i));
    os << buf;
  }
}

}  // namespace thermoflux

#endif  // THERMOFLUX_GIBBS_SAMPLER_HPP
