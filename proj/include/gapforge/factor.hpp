#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gapforge/primes.hpp"
#include "gapforge/rng.hpp"

namespace gapforge::factor {

using u64 = std::uint64_t;

namespace detail {

inline u64 pollard_rho(u64 n) {
  // Brent's cycle variant; n odd composite, not a prime power of interest
  rng::SplitMix64 g(n ^ 0x5bf03635f0912a5bULL);
  for (;;) {
    const u64 c = 1 + g.below(n - 1);
    u64 x = g.below(n), y = x, d = 1;
    u64 saved = 1;
    int count = 0;
    auto step = [&](u64 v) { return (primes::mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      const u64 diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      saved = primes::mulmod(saved, diff, n);
      if (++count % 64 == 0) {
        d = std::gcd(saved, n);
        saved = 1;
      }
    }
    if (d == 1) d = std::gcd(saved, n);
    if (d != 1 && d != n) return d;
  }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n < 2) return;
  if (primes::is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

// Prime factorization as (prime, exponent) pairs, primes ascending.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<u64> flat;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull})
    while (n % p == 0) {
      flat.push_back(p);
      n /= p;
    }
  if (n > 1) detail::factor_into(n, flat);
  std::sort(flat.begin(), flat.end());
  std::vector<std::pair<u64, int>> out;
  for (u64 p : flat) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

inline std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (const auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline int mobius(u64 n) {
  if (n == 0) return 0;
  int sign = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

inline u64 euler_phi(u64 n) {
  u64 phi = n;
  for (const auto& [p, e] : factorize(n)) phi -= phi / p;
  return phi;
}

}  // namespace gapforge::factor
