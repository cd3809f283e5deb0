#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gapforge/bignat.hpp"
#include "gapforge/covering.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::crtgap {

using u64 = std::uint64_t;

struct CrtError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CrtResult {
  BigNat value;    // unique solution in [0, modulus)
  BigNat modulus;  // product of the class moduli
};

// Garner's incremental reconstruction over classes sorted by modulus.
// classes are (residue, modulus) pairs; moduli must be pairwise coprime.
inline CrtResult crt_assemble(std::vector<std::pair<BigNat, BigNat>> classes) {
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  BigNat value = 0, modulus = 1;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const BigNat& r = classes[i].first;
    const BigNat& m = classes[i].second;
    if (m < 1) throw CrtError("modulus must be positive");
    BigNat g;
    mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t());
    if (g != 1) {
      for (std::size_t j = 0; j < i; ++j) {
        mpz_gcd(g.get_mpz_t(), classes[j].second.get_mpz_t(), m.get_mpz_t());
        if (g != 1)
          throw CrtError("non-coprime moduli " + to_dec(classes[j].second) +
                         " and " + to_dec(m));
      }
      throw CrtError("non-coprime moduli");
    }
    // t = (r - value) * modulus^-1 mod m
    BigNat inv;
    if (mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t()) == 0)
      throw CrtError("modulus not invertible");
    BigNat t = ((r - value) % m) * inv % m;
    if (t < 0) t += m;
    value += t * modulus;
    modulus *= m;
  }
  return {value, modulus};
}

// Self-contained proof that (m0, m0+y] is prime-free: a divisor witness for
// every offset.
struct GapCertificate {
  BigNat m0 = 1;
  BigNat modulus = 1;  // product of the covering moduli
  u64 x = 0;
  u64 y = 0;
  std::vector<std::pair<u64, u64>> witnesses;  // (offset u, prime p), u ascending
  std::map<int, u64> stage_counts;             // construction stages, informative

  std::optional<u64> witness_for(u64 u) const {
    auto it = std::lower_bound(
        witnesses.begin(), witnesses.end(), u,
        [](const auto& w, u64 key) { return w.first < key; });
    if (it == witnesses.end() || it->first != u) return std::nullopt;
    return it->second;
  }
};

struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// m0 with m0 = -h_p (mod p) for every class; every covered offset then has
// its class modulus as a divisor witness of m0 + u. Witnesses pick the
// smallest covering modulus.
inline GapCertificate certify_gap(const covering::CoveringSystem& cs) {
  if (!cs.complete)
    throw CertificateError("covering system is not complete");
  const auto check = covering::verify_covering(cs);
  if (!check.covered)
    throw CertificateError("covering claims completeness but misses offset " +
                           std::to_string(check.first_uncovered.value_or(0)));
  GapCertificate cert;
  cert.x = cs.x;
  cert.y = cs.y;
  if (!cs.classes.empty()) {
    std::vector<std::pair<BigNat, BigNat>> crt_classes;
    crt_classes.reserve(cs.classes.size());
    for (const auto& c : cs.classes) {
      const u64 negated = c.residue == 0 ? 0 : c.modulus - c.residue;
      crt_classes.emplace_back(BigNat(negated), BigNat(c.modulus));
      cert.stage_counts[c.stage]++;
    }
    auto crt = crt_assemble(std::move(crt_classes));
    cert.m0 = crt.value;
    cert.modulus = crt.modulus;
    if (cert.m0 == 0) cert.m0 = cert.modulus;  // smallest positive solution
  }
  std::vector<covering::CongruenceClass> by_mod(cs.classes);
  std::sort(by_mod.begin(), by_mod.end(),
            [](const auto& a, const auto& b) { return a.modulus < b.modulus; });
  for (u64 u = 1; u <= cs.y; ++u) {
    for (const auto& c : by_mod) {
      if (u % c.modulus == c.residue) {
        cert.witnesses.emplace_back(u, c.modulus);
        break;
      }
    }
  }
  return cert;
}

// Offsets where the witness equals m0+u itself (m0+u is the witness prime);
// one lift removes them all.
inline std::vector<u64> degenerate_offsets(const GapCertificate& cert) {
  std::vector<u64> out;
  for (const auto& [u, p] : cert.witnesses)
    if (cert.m0 + u == p) out.push_back(u);
  return out;
}

inline GapCertificate lift_certificate(GapCertificate cert, u64 t) {
  cert.m0 += BigNat(t) * cert.modulus;
  return cert;
}

struct VerifyOutcome {
  bool ok = false;
  std::optional<u64> failing_offset;
  std::string reason;
};

// Checks every u in (0, y]: a witness exists, divides m0+u, and sits
// strictly between 1 and m0+u. Offset checks can run on several workers.
inline VerifyOutcome verify_certificate(const GapCertificate& cert,
                                        unsigned jobs = 1) {
  if (cert.m0 < 1) return {false, std::nullopt, "m0 must be >= 1"};
  if (cert.y == 0) return {true, std::nullopt, ""};
  for (u64 u = 1; u <= cert.y; ++u)
    if (!cert.witness_for(u))
      return {false, u, "offset has no witness"};

  std::vector<char> bad(cert.witnesses.size(), 0);
  par::parallel_for(cert.witnesses.size(), jobs, [&](std::size_t i) {
    const auto [u, p] = cert.witnesses[i];
    if (p <= 1) {
      bad[i] = 1;
      return;
    }
    BigNat value = cert.m0 + u;
    if (value % p != 0 || value <= p) bad[i] = 1;
  });
  for (std::size_t i = 0; i < bad.size(); ++i)
    if (bad[i]) {
      const auto [u, p] = cert.witnesses[i];
      BigNat value = cert.m0 + u;
      if (value % p != 0)
        return {false, u, "witness does not divide m0+u"};
      return {false, u, "witness is not a proper divisor"};
    }
  return {true, std::nullopt, ""};
}

// Independent confirmation: locate the primes surrounding m0 by direct
// primality scanning and require the observed gap to be at least y.
// Deterministic 64-bit testing caps the oracle scale.
inline primes::GapRecord brute_gap_check(const GapCertificate& cert,
                                         u64 budget = (1ull << 62)) {
  BigNat top = cert.m0 + cert.y;
  if (!fits_u64(top) || to_u64(top) > budget)
    throw CertificateError("certificate exceeds brute-force oracle scale");
  const u64 m0 = fits_u64(cert.m0) ? to_u64(cert.m0) : 0;
  u64 p_lo = 0;
  for (u64 v = m0; v >= 2; --v)
    if (primes::is_prime(v)) {
      p_lo = v;
      break;
    }
  if (p_lo == 0) {
    // degenerate origin below the first prime
    p_lo = 2;
    u64 p_hi = 3;
    return primes::make_gap_record(p_lo, p_hi);
  }
  u64 p_hi = m0 + 1;
  while (!primes::is_prime(p_hi)) ++p_hi;
  auto rec = primes::make_gap_record(p_lo, p_hi);
  if (rec.gap < cert.y)
    throw CertificateError("brute scan found gap smaller than y");
  return rec;
}

inline nlohmann::json to_json(const GapCertificate& cert) {
  nlohmann::json j;
  j["version"] = 1;
  j["x"] = cert.x;
  j["y"] = cert.y;
  j["modulus"] = to_dec(cert.modulus);
  j["m0"] = to_dec(cert.m0);
  nlohmann::json w = nlohmann::json::array();
  for (const auto& [u, p] : cert.witnesses) w.push_back({u, p});
  j["witnesses"] = std::move(w);
  if (!cert.stage_counts.empty()) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [stage, count] : cert.stage_counts)
      s[std::to_string(stage)] = count;
    j["stages"] = std::move(s);
  }
  return j;
}

inline GapCertificate certificate_from_json(const nlohmann::json& j) {
  GapCertificate cert;
  if (!j.contains("version") || j.at("version").get<int>() != 1)
    throw CertificateError("unsupported certificate version");
  cert.x = j.at("x").get<u64>();
  cert.y = j.at("y").get<u64>();
  cert.modulus = bignat_from_dec(j.at("modulus").get<std::string>());
  cert.m0 = bignat_from_dec(j.at("m0").get<std::string>());
  for (const auto& w : j.at("witnesses"))
    cert.witnesses.emplace_back(w.at(0).get<u64>(), w.at(1).get<u64>());
  std::sort(cert.witnesses.begin(), cert.witnesses.end());
  if (j.contains("stages"))
    for (const auto& [k, v] : j.at("stages").items())
      cert.stage_counts[std::stoi(k)] = v.get<u64>();
  return cert;
}

}  // namespace gapforge::crtgap
