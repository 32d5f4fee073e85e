#ifndef THERMOFLUX_CUMULANT_ALGEBRA_HPP
#define THERMOFLUX_CUMULANT_ALGEBRA_HPP

// Exact cumulants of the oscillator energy.
//
// With u = 1/(e^{beta a} - 1) one has -d/dx u = u + u^2, so each further
// derivative of the mean occupation is a polynomial in u:
//   K_n = N a^n sum_{m=1}^{n} c(n, m) u^m,
//   c(n+1, m) = m c(n, m) + (m-1) c(n, m-1),  c(n, 1) = 1,  c(n, n) = (n-1)!.
// The same integers are (m-1)! times the Stirling numbers of the second kind.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "thermoflux/core_thermo.hpp"
#include "thermoflux/errors.hpp"

namespace thermoflux {

using Int128 = __int128;

inline constexpr int kMaxCumulantOrder = 20;

namespace detail {

inline Int128 checked_mul(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw OrderTooLarge("128-bit overflow in exact arithmetic");
  return out;
}

inline Int128 checked_add(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw OrderTooLarge("128-bit overflow in exact arithmetic");
  return out;
}

inline Int128 checked_pow(Int128 base, int exp) {
  Int128 out = 1;
  for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

inline Int128 binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int128 out = 1;
  for (int i = 1; i <= k; ++i) out = checked_mul(out, n - k + i) / i;  // exact at each step
  return out;
}

inline Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

inline Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline void check_order(int n, int limit = kMaxCumulantOrder) {
  if (n < 1) throw DomainError("order must be >= 1, got " + std::to_string(n));
  if (n > limit)
    throw OrderTooLarge("order " + std::to_string(n) + " exceeds the exact-arithmetic limit " +
                        std::to_string(limit));
}

}  // namespace detail

/// Decimal rendering of a 128-bit integer.
inline std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  while (v != 0) {
    const int digit = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

/// Exact rational with 128-bit numerator and positive denominator, kept reduced.
struct Rational {
  Int128 num = 0;
  Int128 den = 1;

  static Rational make(Int128 n, Int128 d) {
    if (d == 0) throw DomainError("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const Int128 g = detail::gcd128(n, d);
    return g > 1 ? Rational{n / g, d / g} : Rational{n, d};
  }

  friend Rational operator+(const Rational& x, const Rational& y) {
    const Int128 g = detail::gcd128(x.den, y.den);
    const Int128 lhs = detail::checked_mul(x.num, y.den / g);
    const Int128 rhs = detail::checked_mul(y.num, x.den / g);
    return make(detail::checked_add(lhs, rhs), detail::checked_mul(x.den / g, y.den));
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    const Int128 g1 = detail::gcd128(x.num, y.den);
    const Int128 g2 = detail::gcd128(y.num, x.den);
    const Int128 a = g1 > 1 ? g1 : 1;
    const Int128 b = g2 > 1 ? g2 : 1;
    return make(detail::checked_mul(x.num / a, y.num / b), detail::checked_mul(x.den / b, y.den / a));
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// c(n, m) for 1 <= m <= n <= n_max, built by the recurrence.
class CoefficientTable {
public:
  explicit CoefficientTable(int n_max) : n_max_(n_max) {
    detail::check_order(n_max);
    entries_.assign(static_cast<std::size_t>(n_max * n_max), 0);
    at(1, 1) = 1;
    for (int n = 1; n < n_max; ++n) {
      at(n + 1, 1) = 1;
      for (int m = 2; m <= n + 1; ++m) {
        const Int128 keep = detail::checked_mul(m, m <= n ? at(n, m) : 0);
        const Int128 grow = detail::checked_mul(m - 1, at(n, m - 1));
        at(n + 1, m) = detail::checked_add(keep, grow);
      }
    }
  }

  int n_max() const noexcept { return n_max_; }

  Int128 operator()(int n, int m) const {
    if (n < 1 || n > n_max_ || m < 1 || m > n)
      throw DomainError("c(" + std::to_string(n) + "," + std::to_string(m) + ") outside table");
    return entries_[index(n, m)];
  }

private:
  std::size_t index(int n, int m) const {
    return static_cast<std::size_t>((n - 1) * n_max_ + (m - 1));
  }
  Int128& at(int n, int m) { return entries_[index(n, m)]; }
  Int128 at(int n, int m) const { return entries_[index(n, m)]; }

  int n_max_;
  std::vector<Int128> entries_;
};

inline CoefficientTable coefficient_table(int n_max) { return CoefficientTable(n_max); }

/// c(n, m) = (1/m) sum_{k=0}^{m} (-1)^{m-k} C(m, k) k^n.
inline Int128 c_explicit(int n, int m) {
  detail::check_order(n);
  if (m < 1 || m > n) throw DomainError("c_explicit requires 1 <= m <= n");
  Int128 sum = 0;
  for (int k = 0; k <= m; ++k) {
    Int128 term = detail::checked_mul(detail::binomial(m, k), detail::checked_pow(k, n));
    if ((m - k) % 2 != 0) term = -term;
    sum = detail::checked_add(sum, term);
  }
  if (sum % m != 0) throw IllConditioned("explicit c(n,m) sum not divisible by m");
  return sum / m;
}

/// Stirling numbers of the second kind, S2(n, m), by their own recurrence.
inline Int128 stirling2(int n, int m) {
  detail::check_order(n);
  if (m < 0 || m > n) return 0;
  std::vector<Int128> row(static_cast<std::size_t>(n + 1), 0);
  row[0] = 1;  // S2(0, 0)
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j >= 1; --j)
      row[static_cast<std::size_t>(j)] = detail::checked_add(
          detail::checked_mul(j, row[static_cast<std::size_t>(j)]), row[static_cast<std::size_t>(j - 1)]);
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(m)];
}

inline Int128 factorial(int n) {
  Int128 out = 1;
  for (int i = 2; i <= n; ++i) out = detail::checked_mul(out, i);
  return out;
}

/// Bernoulli numbers B_0..B_kmax in the B_1 = +1/2 convention, i.e. the
/// generating function x/(1 - e^{-x}).
inline std::vector<Rational> bernoulli_numbers(int kmax) {
  std::vector<Rational> b(static_cast<std::size_t>(kmax + 1));
  b[0] = {1, 1};
  // sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1 gives the B_1 = -1/2 numbers.
  for (int k = 1; k <= kmax; ++k) {
    Rational acc{0, 1};
    for (int j = 0; j < k; ++j)
      acc = acc + Rational::make(detail::binomial(k + 1, j), 1) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(k)] = Rational::make(-acc.num, detail::checked_mul(acc.den, k + 1));
  }
  if (kmax >= 1) b[1] = {1, 2};
  return b;
}

struct PowerSumCheck {
  Int128 direct = 0;
  Int128 bernoulli_form = 0;
  Int128 c_form = 0;
  bool agree() const noexcept { return direct == bernoulli_form && direct == c_form; }
};

inline constexpr int kMaxPowerSumOrder = 10;
inline constexpr int kMaxPowerSumCount = 1000;

/// S_m(n) = 1^m + ... + n^m by direct summation, by Faulhaber's formula and
/// by sum_{k=1}^{m} k c(m, k) C(n+1, k+1).
inline PowerSumCheck power_sum_check(int m, int n) {
  detail::check_order(m, kMaxPowerSumOrder);
  if (n < 1) throw DomainError("power_sum_check requires n >= 1");
  if (n > kMaxPowerSumCount)
    throw OrderTooLarge("power_sum_check count " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxPowerSumCount));
  PowerSumCheck out;
  for (int k = 1; k <= n; ++k) out.direct = detail::checked_add(out.direct, detail::checked_pow(k, m));

  const auto b = bernoulli_numbers(m);
  Rational faulhaber{0, 1};
  for (int k = 0; k <= m; ++k)
    faulhaber = faulhaber + Rational::make(detail::checked_mul(detail::binomial(m + 1, k),
                                                               detail::checked_pow(n, m + 1 - k)),
                                           1) *
                                b[static_cast<std::size_t>(k)];
  faulhaber = faulhaber * Rational::make(1, m + 1);
  if (faulhaber.den != 1) throw IllConditioned("Faulhaber sum is not an integer");
  out.bernoulli_form = faulhaber.num;

  const CoefficientTable table(m);
  for (int k = 1; k <= m; ++k)
    out.c_form = detail::checked_add(
        out.c_form, detail::checked_mul(detail::checked_mul(k, table(m, k)), detail::binomial(n + 1, k + 1)));
  return out;
}

enum class CumulantKind { energy, fluctuation };

/// K_1..K_n (energy) or kappa_1..kappa_n (specific-energy fluctuation).
struct CumulantVector {
  CumulantKind kind = CumulantKind::energy;
  std::vector<double> values;  // values[0] is the first cumulant

  int order() const noexcept { return static_cast<int>(values.size()); }
  /// 1-based access.
  double operator()(int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

/// K_n = N a^n sum_m c(n, m) / (e^{beta a} - 1)^m. Formal evaluation allows
/// beta*a < 0 (symmetric dual), where the same closed form is used.
inline CumulantVector energy_cumulants(double beta, double a, double n_particles, int n_max,
                                       Evaluation mode = Evaluation::strict) {
  detail::check_order(n_max);
  const double x = detail::checked_beta_a(beta, a, mode);
  const double u = detail::occupation(x);
  const CoefficientTable table(n_max);
  CumulantVector out{CumulantKind::energy, std::vector<double>(static_cast<std::size_t>(n_max))};
  double a_pow = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    a_pow *= a;
    // Horner in u: sum_{m=1}^{n} c(n,m) u^m.
    double poly = 0.0;
    for (int m = n; m >= 1; --m) poly = (poly + static_cast<double>(table(n, m))) * u;
    out.values[static_cast<std::size_t>(n - 1)] = n_particles * a_pow * poly;
  }
  return out;
}

inline CumulantVector energy_cumulants(const ThermoState& state, const OscillatorEnsemble& ens,
                                       int n_max) {
  return energy_cumulants(state.beta, ens.a(), ens.n(), n_max, Evaluation::strict);
}

/// Cumulants of delta eps = (E - <E>)/N: kappa_1 = 0, kappa_n = K_n / N^n.
inline CumulantVector fluctuation_cumulants(double beta, double a, double n_particles, int n_max,
                                            Evaluation mode = Evaluation::strict) {
  auto k = energy_cumulants(beta, a, n_particles, n_max, mode);
  k.kind = CumulantKind::fluctuation;
  k.values[0] = 0.0;
  double scale = n_particles;
  for (int n = 2; n <= n_max; ++n) {
    scale *= n_particles;
    k.values[static_cast<std::size_t>(n - 1)] /= scale;
  }
  return k;
}

inline CumulantVector fluctuation_cumulants(const ThermoState& state, const OscillatorEnsemble& ens,
                                            int n_max) {
  return fluctuation_cumulants(state.beta, ens.a(), ens.n(), n_max, Evaluation::strict);
}

struct MomentSequence {
  std::vector<double> raw;      // raw[k] = E[X^k], raw[0] = 1
  std::vector<double> central;  // central[k] = E[(X - mean)^k]
};

namespace detail {

inline std::vector<double> raw_from_cumulants(const std::vector<double>& kappa) {
  const std::size_t order = kappa.size();
  std::vector<double> m(order + 1, 0.0);
  m[0] = 1.0;
  for (std::size_t n = 1; n <= order; ++n) {
    double acc = 0.0;
    double binom = 1.0;  // C(n-1, k)
    for (std::size_t k = 0; k < n; ++k) {
      acc += binom * kappa[k] * m[n - 1 - k];
      binom = binom * static_cast<double>(n - 1 - k) / static_cast<double>(k + 1);
    }
    m[n] = acc;
  }
  return m;
}

}  // namespace detail

/// Raw and central moments from cumulants via
/// m_n = sum_{k=0}^{n-1} C(n-1, k) kappa_{k+1} m_{n-1-k}.
inline MomentSequence cumulants_to_moments(const CumulantVector& kappa) {
  if (kappa.order() > kMaxCumulantOrder)
    throw OrderTooLarge("moment conversion supports order <= 20");
  MomentSequence out;
  out.raw = detail::raw_from_cumulants(kappa.values);
  auto centered = kappa.values;
  if (!centered.empty()) centered[0] = 0.0;
  out.central = detail::raw_from_cumulants(centered);
  return out;
}

/// Inverse of cumulants_to_moments; raw[0] must be 1.
inline CumulantVector moments_to_cumulants(const std::vector<double>& raw,
                                           CumulantKind kind = CumulantKind::energy) {
  if (raw.empty() || raw[0] != 1.0) throw DomainError("raw moments must start with m_0 = 1");
  const std::size_t order = raw.size() - 1;
  if (order > static_cast<std::size_t>(kMaxCumulantOrder))
    throw OrderTooLarge("moment conversion supports order <= 20");
  CumulantVector out{kind, std::vector<double>(order, 0.0)};
  for (std::size_t n = 1; n <= order; ++n) {
    double acc = raw[n];
    double binom = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      acc -= binom * out.values[k] * raw[n - 1 - k];
      binom = binom * static_cast<double>(n - 1 - k) / static_cast<double>(k + 1);
    }
    out.values[n - 1] = acc;
  }
  return out;
}

/// (-d/dbeta)^n log Z_N by central differences with Richardson extrapolation.
/// Base step h = 1e-2 * beta; the table uses steps h, 2h, 4h, 8h and removes
/// the h^2, h^4, h^6 error terms. Evaluated in long double.
inline double log_partition_derivative(double beta, double a, double n_particles, int order) {
  if (order < 1 || order > 8) throw DomainError("finite-difference order must be in [1, 8]");
  detail::checked_beta_a(beta, a, Evaluation::strict);
  using ld = long double;
  const auto log_z = [&](ld b) { return -static_cast<ld>(n_particles) * std::log1p(-std::exp(-b * a)); };
  const auto stencil = [&](ld h) {
    ld acc = 0.0L;
    ld binom = 1.0L;
    for (int j = 0; j <= order; ++j) {
      const ld offset = (static_cast<ld>(order) / 2.0L - j) * h;
      acc += ((j % 2 == 0) ? binom : -binom) * log_z(static_cast<ld>(beta) + offset);
      binom = binom * static_cast<ld>(order - j) / static_cast<ld>(j + 1);
    }
    ld hn = 1.0L;
    for (int j = 0; j < order; ++j) hn *= h;
    return acc / hn;
  };
  constexpr int levels = 4;
  std::array<ld, levels> table{};
  const ld h0 = 1e-2L * static_cast<ld>(beta);
  for (int i = 0; i < levels; ++i) table[static_cast<std::size_t>(i)] = stencil(h0 * static_cast<ld>(1 << i));
  // Extrapolate toward the smallest step.
  for (int k = 1; k < levels; ++k) {
    const ld factor = std::pow(4.0L, static_cast<ld>(k));
    for (int i = 0; i + k < levels; ++i)
      table[static_cast<std::size_t>(i)] =
          (factor * table[static_cast<std::size_t>(i)] - table[static_cast<std::size_t>(i + 1)]) /
          (factor - 1.0L);
  }
  const ld sign = (order % 2 == 0) ? 1.0L : -1.0L;
  return static_cast<double>(sign * table[0]);
}

}  // namespace thermoflux

#endif  // THERMOFLUX_CUMULANT_ALGEBRA_HPP
