#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gapforge/certificate.hpp"
#include "gapforge/factor.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/primes.hpp"
#include "gapforge/rng.hpp"

namespace gapforge::kpower {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// K-th power residue services at a fixed prime: D = gcd(p-1, K), a stored
// primitive root, and discrete logs by baby-step giant-step.
class KPowerContext {
 public:
  KPowerContext(u64 p, u64 K) : p_(p), K_(K) {
    if (!primes::is_prime(p)) throw std::invalid_argument("p must be prime");
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    D_ = std::gcd(p - 1, K);
    generator_ = find_primitive_root();
    baby_steps_ = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(p_ - 1))));
    if (baby_steps_ == 0) baby_steps_ = 1;
    u64 v = 1;
    baby_.reserve(baby_steps_);
    for (u64 j = 0; j < baby_steps_; ++j) {
      baby_.emplace(v, j);
      v = primes::mulmod(v, generator_, p_);
    }
    giant_factor_ = modinv(primes::powmod(generator_, baby_steps_, p_));
  }

  u64 p() const { return p_; }
  u64 K() const { return K_; }
  u64 D() const { return D_; }
  u64 generator() const { return generator_; }

  // index s with generator^s = a (mod p); a must be nonzero mod p
  u64 dlog(u64 a) const {
    a %= p_;
    if (a == 0) throw std::domain_error("dlog of 0");
    u64 cur = a;
    for (u64 i = 0; i <= baby_steps_; ++i) {
      auto it = baby_.find(cur);
      if (it != baby_.end()) return (i * baby_steps_ + it->second) % (p_ - 1);
      cur = primes::mulmod(cur, giant_factor_, p_);
    }
    throw std::logic_error("dlog failed");
  }

  // is n = 1 - c^K (mod p) solvable with p not dividing c?
  bool solvable(i64 n) const {
    const u64 t = reduce(1 - n);
    if (t == 0) return false;
    return dlog(t) % D_ == 0;
  }

  // (1/D) sum_l chi_l(1-n); 1 on solvable n, 0 otherwise, 0 when p | 1-n
  double character_indicator(i64 n) const {
    const u64 t = reduce(1 - n);
    if (t == 0) return 0.0;
    const u64 s = dlog(t);
    std::complex<double> acc{0.0, 0.0};
    for (u64 l = 0; l < D_; ++l) {
      const double ang = 2.0 * M_PI * static_cast<double>(l) *
                         static_cast<double>(s % D_) / static_cast<double>(D_);
      acc += std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc.real() / static_cast<double>(D_);
  }

  u64 reduce(i64 v) const {
    i64 m = v % static_cast<i64>(p_);
    if (m < 0) m += static_cast<i64>(p_);
    return static_cast<u64>(m);
  }

 private:
  u64 modinv(u64 a) const {
    return primes::powmod(a, p_ - 2, p_);
  }

  u64 find_primitive_root() const {
    if (p_ == 2) return 1;
    const auto qs = factor::distinct_prime_factors(p_ - 1);
    for (u64 g = 2; g < p_; ++g) {
      bool ok = true;
      for (u64 q : qs)
        if (primes::powmod(g, (p_ - 1) / q, p_) == 1) {
          ok = false;
          break;
        }
      if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
  }

  u64 p_, K_, D_, generator_;
  u64 baby_steps_;
  u64 giant_factor_;
  std::unordered_map<u64, u64> baby_;
};

inline bool kpower_solvable(i64 n, const KPowerContext& ctx) {
  return ctx.solvable(n);
}

inline double character_indicator(i64 n, const KPowerContext& ctx) {
  return ctx.character_indicator(n);
}

struct ResidueEntry {
  u64 s = 0;  // odd prime modulus
  u64 a = 0;  // a = 1 - (c+1)^K mod s
  u64 c = 0;  // companion witness, c != s-1
};

struct ResidueVectorK {
  u64 K = 1;
  u64 seed = 0;
  std::vector<ResidueEntry> entries;
};

// c_s uniform over [0, s-1) (so c_s + 1 is never 0 mod s), a_s derived.
// Deterministic for a given seed.
inline ResidueVectorK select_residues_K(const std::vector<u64>& primes_list,
                                        u64 K, u64 seed) {
  ResidueVectorK out;
  out.K = K;
  out.seed = seed;
  out.entries.reserve(primes_list.size());
  for (std::size_t i = 0; i < primes_list.size(); ++i) {
    const u64 s = primes_list[i];
    if (s < 3 || !primes::is_prime(s))
      throw std::invalid_argument("select_residues_K: moduli must be odd primes");
    auto g = rng::substream(seed, i);
    const u64 c = g.below(s - 1);
    const u64 pw = primes::powmod(c + 1, K, s);
    out.entries.push_back({s, (1 + s - pw) % s, c});
  }
  return out;
}

// Integers of (lo, hi] avoiding every class a_s mod s.
inline std::vector<u64> sifted_set(u64 lo, u64 hi,
                                   const std::vector<std::pair<u64, u64>>& classes) {
  std::vector<u64> out;
  for (u64 n = lo + 1; n <= hi && n >= lo + 1; ++n) {
    bool keep = true;
    for (const auto& [a, s] : classes)
      if (n % s == a % s) {
        keep = false;
        break;
      }
    if (keep) out.push_back(n);
  }
  return out;
}

// Primes in (x, C0*x] restricted by the parity-dependent congruence:
// K odd -> p = 2 (mod 3); K even -> p = 3 (mod 2K) by default, the printed
// 3K variant behind a flag.
inline std::vector<u64> tilde_primes(u64 x, double C0, u64 K,
                                     bool use_3k_variant = false) {
  if (K < 2) throw std::invalid_argument("tilde_primes: K >= 2");
  const u64 hi = static_cast<u64>(std::floor(C0 * static_cast<double>(x)));
  std::vector<u64> out;
  for (u64 p : primes::sieve_segment(x + 1, hi + 1)) {
    if (K % 2 == 1) {
      if (p % 3 == 2) out.push_back(p);
    } else {
      const u64 m = use_3k_variant ? 3 * K : 2 * K;
      if (p % m == 3 % m) out.push_back(p);
    }
  }
  return out;
}

inline int legendre_symbol(i64 a, u64 p) {
  i64 m = a % static_cast<i64>(p);
  if (m < 0) m += static_cast<i64>(p);
  if (m == 0) return 0;
  const u64 e = primes::powmod(static_cast<u64>(m), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

// u in [0, y] for which (-u/p) = 1 holds for at most delta * |tilde_P|
// of the primes. Euler-criterion exact.
inline std::vector<u64> exceptional_U(u64 y, const std::vector<u64>& tilde_P,
                                      double delta) {
  std::vector<u64> out;
  const double threshold = delta * static_cast<double>(tilde_P.size());
  for (u64 u = 0; u <= y; ++u) {
    u64 count = 0;
    for (u64 p : tilde_P)
      if (legendre_symbol(-static_cast<i64>(u), p) == 1) ++count;
    if (static_cast<double>(count) <= threshold) out.push_back(u);
  }
  return out;
}

struct GoodSetParams {
  u64 K = 2;
  double epsilon = 0.05;
  // S_u families: residue u (mod K), coprime to K, primes ascending
  std::map<u64, std::vector<u64>> families;

  static GoodSetParams from_range(u64 K, u64 lo, u64 hi, double epsilon = 0.05) {
    GoodSetParams params;
    params.K = K;
    params.epsilon = epsilon;
    for (u64 s : primes::sieve_segment(lo + 1, hi + 1)) {
      const u64 u = s % K;
      if (std::gcd(u, K) != 1) continue;
      params.families[u].push_back(s);
    }
    return params;
  }
};

struct GoodSetReport {
  std::map<u64, double> r_values;   // u -> r(n, u)
  std::map<u64, double> r_star;     // u -> r*(u)
  bool in_good_set = true;
};

// r(n,u) sums 1/s over the family primes where n = 1-(c+1)^K (mod s) is
// solvable; membership requires |r - r*| <= epsilon for every u.
inline GoodSetReport good_set_membership(i64 n, const GoodSetParams& params) {
  GoodSetReport rep;
  for (const auto& [u, fam] : params.families) {
    const u64 d = std::gcd(u >= 1 ? u - 1 : params.K - 1, params.K);
    double r = 0.0, rstar = 0.0;
    for (u64 s : fam) {
      rstar += 1.0 / static_cast<double>(s);
      KPowerContext ctx(s, params.K);
      if (ctx.solvable(n)) r += 1.0 / static_cast<double>(s);
    }
    rstar /= static_cast<double>(d == 0 ? 1 : d);
    rep.r_values[u] = r;
    rep.r_star[u] = rstar;
    if (std::abs(r - rstar) > params.epsilon) rep.in_good_set = false;
  }
  return rep;
}

// a_{r,u} = (m0 + 1 + r Px)^K + u - 1, evaluated lazily.
struct MaierMatrix {
  BigNat m0;
  BigNat Px;
  u64 K = 1;
  u64 rows = 0;
  u64 y = 0;

  BigNat base(u64 r) const { return m0 + 1 + BigNat(r) * Px; }

  BigNat entry(u64 r, u64 u) const {
    if (r < 1 || r > rows || u < 1 || u > y)
      throw std::out_of_range("matrix index");
    BigNat b = base(r);
    BigNat e;
    mpz_pow_ui(e.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(K));
    return e + u - 1;
  }
};

inline MaierMatrix build_matrix(BigNat m0, BigNat Px, u64 K, u64 rows, u64 y,
                                u64 budget = 10000000) {
  if (rows == 0 || y == 0) throw std::invalid_argument("empty matrix");
  if (rows > budget / y)
    throw std::invalid_argument("matrix exceeds the rows*y compute budget");
  MaierMatrix M;
  M.m0 = std::move(m0);
  M.Px = std::move(Px);
  M.K = K;
  M.rows = rows;
  M.y = y;
  return M;
}

// The K-lift of a level-1 gap certificate: for each covering class h_p,
// the matrix congruence needs m0' = c_p with (c_p+1)^K = 1 - h_p (mod p).
// Classes where that has no solution lose their offsets to the exceptional
// set, which row scans must clear by direct primality testing.
struct KPowerSystem {
  u64 K = 1;
  u64 y = 0;
  BigNat m0;  // CRT solution of the c_p congruences
  BigNat Px;  // product of the witness primes
  struct ClassInfo {
    u64 p = 0;
    u64 h = 0;     // original covering residue
    bool usable = false;
    u64 c = 0;     // smallest companion when usable
  };
  std::vector<ClassInfo> classes;
  std::vector<std::pair<u64, u64>> witnesses;  // offset u in [2,y] -> prime
  std::vector<u64> exceptional;                // offsets in [2,y] uncovered
};

inline KPowerSystem lift_to_kpower(const crtgap::GapCertificate& cert, u64 K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  KPowerSystem sys;
  sys.K = K;
  sys.y = cert.y;

  std::vector<u64> mods;
  for (const auto& [u, p] : cert.witnesses) mods.push_back(p);
  std::sort(mods.begin(), mods.end());
  mods.erase(std::unique(mods.begin(), mods.end()), mods.end());

  std::vector<std::pair<BigNat, BigNat>> crt_classes;
  for (u64 p : mods) {
    KPowerSystem::ClassInfo info;
    info.p = p;
    info.h = to_u64((p - cert.m0 % p) % p);  // h_p = -m0 mod p
    const u64 target = (1 + p - info.h % p) % p;  // want (c+1)^K = 1 - h_p
    for (u64 c = 0; c + 1 < p; ++c) {
      if (primes::powmod(c + 1, K, p) == target) {
        info.usable = true;
        info.c = c;
        break;
      }
    }
    crt_classes.emplace_back(BigNat(info.usable ? info.c : 0), BigNat(p));
    sys.classes.push_back(info);
  }
  auto crt = crtgap::crt_assemble(std::move(crt_classes));
  sys.m0 = crt.value;
  sys.Px = crt.modulus;

  for (u64 u = 2; u <= cert.y; ++u) {
    u64 witness = 0;
    for (const auto& info : sys.classes) {
      if (!info.usable) continue;
      if (u % info.p == info.h) {
        witness = info.p;
        break;
      }
    }
    if (witness != 0)
      sys.witnesses.emplace_back(u, witness);
    else
      sys.exceptional.push_back(u);
  }
  return sys;
}

inline MaierMatrix matrix_from_system(const KPowerSystem& sys, u64 rows,
                                      u64 budget = 10000000) {
  return build_matrix(sys.m0, sys.Px, sys.K, rows, std::max<u64>(sys.y, 1),
                      budget);
}

struct RowScan {
  std::vector<u64> prime_base_rows;      // R0: base is a (probable) prime
  std::vector<u64> rows_with_prime;      // R1: an exceptional entry is prime
  std::vector<u64> winners;              // R0 \ R1
  bool any_probable = false;             // some test above 64 bits
};

// Classifies rows: base prime (R0), exceptional-offset entries prime (R1),
// winners = R0 \ R1. Witnessed offsets are spot-verified by divisibility.
inline RowScan scan_rows(const MaierMatrix& M,
                         const std::vector<u64>& exceptional,
                         const std::vector<std::pair<u64, u64>>& witnesses = {},
                         unsigned jobs = 1) {
  RowScan out;
  // witnessed offsets do not depend on the row: base = m0+1 (mod p)
  for (const auto& [u, p] : witnesses) {
    BigNat b0 = (M.m0 + 1) % p;
    const u64 pw = primes::powmod(to_u64(b0), M.K, p);
    if ((pw + u - 1) % p != 0)
      throw std::invalid_argument("witness fails divisibility at offset " +
                                  std::to_string(u));
    if (M.Px % p != 0)
      throw std::invalid_argument("witness prime does not divide Px");
  }

  struct RowFlags {
    char base_prime = 0;
    char has_prime = 0;
    char probable = 0;
  };
  std::vector<RowFlags> flags(M.rows);
  par::parallel_for(M.rows, jobs, [&](std::size_t i) {
    const u64 r = static_cast<u64>(i) + 1;
    BigNat b = M.base(r);
    auto verdict = primes::classify(b);
    if (verdict == primes::Primality::probably_prime) flags[i].probable = 1;
    if (verdict == primes::Primality::composite) return;
    flags[i].base_prime = 1;
    for (u64 u : exceptional) {
      if (u < 2 || u > M.y) continue;
      BigNat e = M.entry(r, u);
      auto v = primes::classify(e);
      if (v == primes::Primality::probably_prime) flags[i].probable = 1;
      if (v != primes::Primality::composite) {
        flags[i].has_prime = 1;
        break;
      }
    }
  });
  for (u64 r = 1; r <= M.rows; ++r) {
    const auto& f = flags[r - 1];
    out.any_probable = out.any_probable || f.probable;
    if (!f.base_prime) continue;
    out.prime_base_rows.push_back(r);
    if (f.has_prime)
      out.rows_with_prime.push_back(r);
    else
      out.winners.push_back(r);
  }
  return out;
}

struct KthPowerHit {
  BigNat q;     // prime with q^K inside the gap
  BigNat qk;    // q^K
  BigNat p_lo;  // surrounding primes
  BigNat p_hi;
};

namespace detail {

inline BigNat kth_root_floor(const BigNat& n, u64 K) {
  BigNat r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(K));
  return r;
}

inline std::optional<KthPowerHit> scan_interval(const BigNat& lo,
                                                const BigNat& hi, u64 K) {
  // strict interior: lo < q^K < hi
  BigNat q = kth_root_floor(lo, K);
  for (; ; ++q) {
    if (q < 2) continue;
    BigNat qk;
    mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(K));
    if (qk >= hi) break;
    if (qk > lo && primes::is_probable_prime(q))
      return KthPowerHit{q, qk, lo, hi};
  }
  return std::nullopt;
}

}  // namespace detail

// Searches first the certificate's own gap, then (optionally) Maier rows:
// a winner row places a prime K-th power at the start of a sieved stretch,
// and the surrounding gap is located by direct scanning.
inline std::optional<KthPowerHit> find_kth_power_in_gap(
    const crtgap::GapCertificate& cert, u64 K, u64 search_rows = 0,
    unsigned jobs = 1) {
  auto rec = crtgap::brute_gap_check(cert);
  if (auto hit = detail::scan_interval(BigNat(rec.p_lo), BigNat(rec.p_hi), K))
    return hit;
  if (search_rows == 0) return std::nullopt;

  auto sys = lift_to_kpower(cert, K);
  auto M = matrix_from_system(sys, search_rows);
  auto scan = scan_rows(M, sys.exceptional, sys.witnesses, jobs);
  for (u64 r : scan.winners) {
    BigNat q = M.base(r);
    BigNat qk = M.entry(r, 1);
    // locate the surrounding gap honestly
    BigNat lo = qk - 1;
    while (!primes::is_probable_prime(lo)) --lo;
    BigNat hi = qk + 1;
    while (!primes::is_probable_prime(hi)) ++hi;
    if (lo < qk && qk < hi) return KthPowerHit{q, qk, lo, hi};
  }
  return std::nullopt;
}

}  // namespace gapforge::kpower
