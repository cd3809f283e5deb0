#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gapforge/bignat.hpp"

namespace gapforge::primes {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = m == 1 ? 0 : 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a) {
  // n odd, n > 2; returns true if a proves n composite
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1 || x == 0) return false;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace detail

// Deterministic primality for all 64-bit inputs via tiered fixed witness
// sets (the 12-prime set is exact far beyond 2^64).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  auto check = [&](std::initializer_list<u64> ws) {
    for (u64 a : ws)
      if (detail::miller_rabin_witness(n, a)) return false;
    return true;
  };
  if (n < 2152302898747ull) return check({2, 3, 5, 7, 11});
  if (n < 341550071728321ull) return check({2, 3, 5, 7, 11, 13, 17});
  return check({2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37});
}

enum class Primality { composite, prime, probably_prime };

// Big inputs fall back to probabilistic testing; the "probable" outcome is
// surfaced so callers can flag it in their outputs.
inline Primality classify(const BigNat& n, int rounds = 64) {
  if (n < 2) return Primality::composite;
  if (fits_u64(n))
    return is_prime(to_u64(n)) ? Primality::prime : Primality::composite;
  const int r = mpz_probab_prime_p(n.get_mpz_t(), rounds);
  if (r == 0) return Primality::composite;
  if (r == 2) return Primality::prime;
  return Primality::probably_prime;
}

inline bool is_probable_prime(const BigNat& n, int rounds = 64) {
  return classify(n, rounds) != Primality::composite;
}

namespace detail {

inline std::vector<u64> simple_sieve(u64 limit) {  // primes <= limit
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<char> comp(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      if (i <= limit / i)
        for (u64 j = i * i; j <= limit; j += i) comp[j] = 1;
    }
  }
  return out;
}

}  // namespace detail

// Exactly the primes in the half-open range [lo, hi), ascending.
// Cache-resident odd-only segments of 2^20 bits.
inline std::vector<u64> sieve_segment(u64 lo, u64 hi) {
  std::vector<u64> out;
  if (hi <= 2 || lo >= hi) return out;
  if (lo <= 2) out.push_back(2);
  const u64 top = hi - 1;
  const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(top))) + 2;
  const std::vector<u64> base = detail::simple_sieve(root);
  constexpr u64 kSegmentOdds = 1u << 20;
  u64 start = std::max<u64>(lo, 3);
  if (start % 2 == 0) ++start;
  for (u64 seg_lo = start; seg_lo <= top; seg_lo += 2 * kSegmentOdds) {
    const u64 seg_hi = std::min(top, seg_lo + 2 * (kSegmentOdds - 1));
    const u64 count = (seg_hi - seg_lo) / 2 + 1;  // odd values in [seg_lo, seg_hi]
    std::vector<char> comp(count, 0);
    for (u64 p : base) {
      if (p == 2) continue;
      if (p * p > seg_hi) break;
      u64 first = std::max(p * p, ((seg_lo + p - 1) / p) * p);
      if (first % 2 == 0) first += p;
      for (u64 j = first; j <= seg_hi; j += 2 * p) comp[(j - seg_lo) / 2] = 1;
    }
    for (u64 i = 0; i < count; ++i)
      if (!comp[i]) out.push_back(seg_lo + 2 * i);
    if (seg_hi == top) break;
  }
  return out;
}

struct PrimeTable {
  u64 limit = 0;
  std::vector<u64> primes;  // exactly the primes <= limit, ascending

  static PrimeTable up_to(u64 limit) {
    PrimeTable t;
    t.limit = limit;
    t.primes = sieve_segment(0, limit == std::numeric_limits<u64>::max()
                                    ? limit
                                    : limit + 1);
    return t;
  }
};

// Product of all primes strictly below x; empty product is 1.
inline BigNat primorial(u64 x) {
  BigNat acc = 1;
  for (u64 p : sieve_segment(0, x)) mpz_mul_ui(acc.get_mpz_t(), acc.get_mpz_t(), p);
  return acc;
}

// log applied k times; throws once an intermediate value leaves the domain.
inline double iterated_log(double x, int k) {
  if (k < 1) throw std::invalid_argument("iterated_log: k must be >= 1");
  double v = x;
  for (int i = 0; i < k; ++i) {
    if (!(v > 0.0)) throw std::domain_error("iterated_log: value left (0,inf)");
    v = std::log(v);
  }
  return v;
}

// log X * log2 X * log4 X / (log3 X)^2, the gap normalization without its
// unspecified constant. Defined (and positive) only past the e^e^e tower.
// The _from_log form takes log X, which keeps tower-sized X reachable.
inline double rankin_lower_bound_from_log(double l1) {
  if (!(l1 > 0)) throw std::domain_error("rankin_lower_bound: X too small");
  const double l2 = std::log(l1);
  if (!(l2 > 0)) throw std::domain_error("rankin_lower_bound: X too small");
  const double l3 = std::log(l2);
  if (!(l3 > 0)) throw std::domain_error("rankin_lower_bound: X too small");
  const double l4 = std::log(l3);
  if (!(l4 > 0)) throw std::domain_error("rankin_lower_bound: X too small");
  return l1 * l2 * l4 / (l3 * l3);
}

inline double rankin_lower_bound(double X) {
  if (!(X > 0)) throw std::domain_error("rankin_lower_bound: X too small");
  return rankin_lower_bound_from_log(std::log(X));
}

struct GapRecord {
  u64 p_lo = 0;
  u64 p_hi = 0;
  u64 gap = 0;
  double merit = 0.0;         // gap / log p_lo
  double rankin_merit = 0.0;  // gap / rankin_lower_bound(p_lo); NaN below domain
};

inline GapRecord make_gap_record(u64 p_lo, u64 p_hi) {
  GapRecord g;
  g.p_lo = p_lo;
  g.p_hi = p_hi;
  g.gap = p_hi - p_lo;
  g.merit = static_cast<double>(g.gap) / std::log(static_cast<double>(p_lo));
  try {
    g.rankin_merit = static_cast<double>(g.gap) /
                     rankin_lower_bound(static_cast<double>(p_lo));
  } catch (const std::domain_error&) {
    g.rankin_merit = std::numeric_limits<double>::quiet_NaN();
  }
  return g;
}

// Maximal gap between consecutive primes p < p' <= X; ties go to the
// smallest lower endpoint.
inline GapRecord max_gap(u64 X) {
  if (X < 3) throw std::invalid_argument("max_gap: need X >= 3");
  const std::vector<u64> ps = sieve_segment(0, X + 1);
  if (ps.size() < 2) throw std::invalid_argument("max_gap: fewer than two primes");
  u64 best_lo = ps[0], best_hi = ps[1];
  for (std::size_t i = 2; i < ps.size(); ++i) {
    if (ps[i] - ps[i - 1] > best_hi - best_lo) {
      best_lo = ps[i - 1];
      best_hi = ps[i];
    }
  }
  return make_gap_record(best_lo, best_hi);
}

// All gap records up to X, in order.
inline std::vector<GapRecord> gap_scan(u64 X) {
  std::vector<GapRecord> out;
  const std::vector<u64> ps = sieve_segment(0, X + 1);
  for (std::size_t i = 1; i < ps.size(); ++i)
    out.push_back(make_gap_record(ps[i - 1], ps[i]));
  return out;
}

namespace detail {

inline u64 psi_count(const std::vector<u64>& ps, std::size_t idx, u64 limit) {
  u64 total = 1;  // the empty product
  for (std::size_t i = idx; i < ps.size(); ++i) {
    const u64 p = ps[i];
    if (p > limit) break;
    for (u64 q = p;;) {
      total += psi_count(ps, i + 1, limit / q);
      if (q > limit / p) break;
      q *= p;
    }
  }
  return total;
}

}  // namespace detail

// Exact count of y-smooth integers in [1, x]. 1 is smooth for every y.
inline u64 psi_exact(u64 x, u64 y) {
  if (x < 1) return 0;
  const std::vector<u64> ps = sieve_segment(0, std::min(x, y) + 1);
  return detail::psi_count(ps, 0, x);
}

// x^eta * prod_{p<=y} (1 - p^-eta)^-1. A genuine upper bound for
// psi_exact(x, y) for every eta > 0 (the geometric series dominates term by
// term); eta in (0,1] is outside the classical statement and flagged by
// callers.
inline double rankin_upper_bound(u64 x, u64 y, double eta) {
  if (!(eta > 0.0))
    throw std::domain_error("rankin_upper_bound: product diverges for eta <= 0");
  double log_val = eta * std::log(static_cast<double>(x));
  for (u64 p : sieve_segment(0, y + 1)) {
    const double f = 1.0 - std::pow(static_cast<double>(p), -eta);
    if (!(f > 0.0))
      throw std::domain_error("rankin_upper_bound: non-positive factor");
    log_val -= std::log(f);
  }
  return std::exp(log_val);
}

struct EtaResult {
  double eta = 0.0;
  double bound = 0.0;
};

// Minimizes rankin_upper_bound over eta in (1, 8] by golden-section search;
// log of the bound is convex in eta so the search is valid.
inline EtaResult optimize_eta(u64 x, u64 y) {
  if (x < 2 || y < 2) throw std::invalid_argument("optimize_eta: need x,y >= 2");
  const std::vector<u64> ps = sieve_segment(0, y + 1);
  const double logx = std::log(static_cast<double>(x));
  auto log_bound = [&](double eta) {
    double v = eta * logx;
    for (u64 p : ps) v -= std::log(1.0 - std::pow(static_cast<double>(p), -eta));
    return v;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1.0 + 1e-9, b = 8.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = log_bound(c), fd = log_bound(d);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = log_bound(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = log_bound(d);
    }
  }
  const double eta = (a + b) / 2;
  return {eta, std::exp(log_bound(eta))};
}

// Z(2n) = sum over prime pairs p < p' <= x with p' - p = 2n of log p log p'.
inline double twin_pair_sum(u64 x, u64 n) {
  if (x < 2) throw std::invalid_argument("twin_pair_sum: need x >= 2");
  const std::vector<u64> ps = sieve_segment(0, x + 1);
  std::vector<char> mark(x + 1, 0);
  for (u64 p : ps) mark[p] = 1;
  double z = 0.0;
  const u64 d = 2 * n;
  for (u64 p : ps) {
    if (p + d > x) break;
    if (mark[p + d])
      z += std::log(static_cast<double>(p)) * std::log(static_cast<double>(p + d));
  }
  return z;
}

struct CirclePair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Both sides of the Fejer-weighted pair identity: the left side by a direct
// double loop over prime pairs, the right side assembled from Z(2m). Equal
// up to rounding because the orthogonality relation is exact.
inline CirclePair circle_identity_check(u64 x, unsigned L) {
  if (L < 1) throw std::invalid_argument("circle_identity_check: need L >= 1");
  const std::vector<u64> ps = sieve_segment(0, x + 1);
  std::vector<double> logs(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    logs[i] = std::log(static_cast<double>(ps[i]));

  const long t0 = 2L * static_cast<long>(L) + 1;
  auto t = [&](long j) -> double {
    const long a = j < 0 ? -j : j;
    return a > 2 * static_cast<long>(L) ? 0.0 : static_cast<double>(t0 - a);
  };

  double lhs = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const long long diff = static_cast<long long>(ps[j]) -
                             static_cast<long long>(ps[i]);
      if (diff % 2 != 0) continue;
      lhs += t(static_cast<long>(diff / 2)) * logs[i] * logs[j];
    }

  double z0 = 0.0;
  for (double lg : logs) z0 += lg * lg;
  double rhs = t(0) * z0;
  for (unsigned m = 1; m <= 2 * L; ++m)
    rhs += 2.0 * t(static_cast<long>(m)) * twin_pair_sum(x, m);
  return {lhs, rhs};
}

namespace detail {

inline u64 euler_phi(u64 n) {
  u64 result = n;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace detail

// sum_{q<=Q} max_{(a,q)=1} |theta(x;q,a) - x/phi(q)| with theta over primes
// only (no prime powers), natural-log weights. Diagnostic, no asymptotic
// claim attached.
inline double theta_discrepancy(u64 x, u64 Q) {
  if (Q < 1) throw std::invalid_argument("theta_discrepancy: need Q >= 1");
  const std::vector<u64> ps = sieve_segment(0, x + 1);
  std::vector<double> logs(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    logs[i] = std::log(static_cast<double>(ps[i]));
  double total = 0.0;
  for (u64 q = 1; q <= Q; ++q) {
    std::vector<double> theta(q, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) theta[ps[i] % q] += logs[i];
    const double target = static_cast<double>(x) / detail::euler_phi(q);
    double worst = 0.0;
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      worst = std::max(worst, std::abs(theta[a] - target));
    }
    total += worst;
  }
  return total;
}

// Partial twin-prime constant 2 * prod_{2<p<=limit} p(p-2)/(p-1)^2,
// strictly decreasing toward 1.3203...
inline double twin_constant(u64 limit) {
  if (limit < 3) throw std::invalid_argument("twin_constant: need limit >= 3");
  double acc = 2.0;
  for (u64 p : sieve_segment(3, limit + 1)) {
    const double pd = static_cast<double>(p);
    acc *= pd * (pd - 2.0) / ((pd - 1.0) * (pd - 1.0));
  }
  return acc;
}

}  // namespace gapforge::primes
