#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "gapforge/factor.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::tuples {

using u64 = std::uint64_t;

struct AdmissibleTuple {
  std::vector<u64> offsets;  // sorted, distinct

  unsigned size() const { return static_cast<unsigned>(offsets.size()); }
};

// Admissible iff no prime p <= r sees all residue classes occupied
// (for p > r that is automatic with r distinct offsets).
inline bool is_admissible(const std::vector<u64>& offsets) {
  const u64 r = offsets.size();
  for (u64 p : primes::sieve_segment(0, r + 1)) {
    std::set<u64> residues;
    for (u64 h : offsets) residues.insert(h % p);
    if (residues.size() >= p) return false;
  }
  return true;
}

inline AdmissibleTuple make_tuple(std::vector<u64> offsets) {
  std::sort(offsets.begin(), offsets.end());
  if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
    throw std::invalid_argument("tuple offsets must be distinct");
  return {std::move(offsets)};
}

// The first r primes larger than r. None of them is divisible by a prime
// <= r, so residue 0 is always free and the tuple is admissible.
inline AdmissibleTuple first_primes_tuple(unsigned r) {
  if (r < 1) throw std::invalid_argument("first_primes_tuple: need r >= 1");
  std::vector<u64> offsets;
  u64 lo = r + 1;
  while (offsets.size() < r) {
    const u64 hi = lo + std::max<u64>(64, lo);
    for (u64 p : primes::sieve_segment(lo, hi)) {
      offsets.push_back(p);
      if (offsets.size() == r) break;
    }
    lo = hi;
  }
  return {std::move(offsets)};
}

struct GPYConfig {
  unsigned k = 1;   // dimension exponent
  double R = 2.0;   // truncation threshold, > 1
};

// mu(d) (log R/d)^k for squarefree d < R, else 0.
inline double gpy_lambda(u64 d, const GPYConfig& cfg) {
  if (d == 0 || static_cast<double>(d) >= cfg.R) return 0.0;
  const int mu = factor::mobius(d);
  if (mu == 0) return 0.0;
  return mu * std::pow(std::log(cfg.R / static_cast<double>(d)),
                       static_cast<double>(cfg.k));
}

// w_n = (sum over squarefree d | prod(n+h_i), d < R of lambda_d)^2.
// The display in the source text omits the square; non-negativity forces it.
inline double gpy_weight(u64 n, const AdmissibleTuple& t, const GPYConfig& cfg) {
  if (t.offsets.empty()) throw std::invalid_argument("empty tuple");
  if (n + t.offsets.front() < 1)
    throw std::invalid_argument("gpy_weight: need n + min offset >= 1");
  std::set<u64> prime_set;
  for (u64 h : t.offsets)
    for (u64 p : factor::distinct_prime_factors(n + h)) prime_set.insert(p);
  std::vector<u64> ps(prime_set.begin(), prime_set.end());

  double sum = 0.0;
  const double logR = std::log(cfg.R);
  // DFS over squarefree divisors with product < R
  auto rec = [&](auto&& self, std::size_t idx, u64 d, int sign) -> void {
    sum += sign * std::pow(logR - std::log(static_cast<double>(d)),
                           static_cast<double>(cfg.k));
    for (std::size_t i = idx; i < ps.size(); ++i) {
      if (static_cast<double>(d) * static_cast<double>(ps[i]) >= cfg.R) continue;
      self(self, i + 1, d * ps[i], -sign);
    }
  };
  rec(rec, 0, 1, 1);
  return sum * sum;
}

struct SStatResult {
  double value = 0.0;
  // some n in [N, 2N] with at least floor(rho)+1 prime translates;
  // present whenever value > 0
  std::optional<u64> witness;
};

// S(N, rho) = sum_{N<=n<=2N} (#prime translates - rho) w_n. A positive sum
// forces a witness with more than rho primes among n+h_i.
inline SStatResult s_statistic(u64 N, double rho, const AdmissibleTuple& t,
                               const GPYConfig& cfg) {
  if (N < 1) throw std::invalid_argument("s_statistic: need N >= 1");
  SStatResult out;
  for (u64 n = N; n <= 2 * N; ++n) {
    unsigned count = 0;
    for (u64 h : t.offsets)
      if (primes::is_prime(n + h)) ++count;
    const double w = gpy_weight(n, t, cfg);
    out.value += (static_cast<double>(count) - rho) * w;
    if (!out.witness && w > 0.0 && static_cast<double>(count) > rho)
      out.witness = n;
  }
  if (out.value <= 0.0) out.witness.reset();
  return out;
}

}  // namespace gapforge::tuples
