#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "gapforge/rng.hpp"
#include "gapforge/tuples.hpp"

using namespace gapforge;
using tuples::AdmissibleTuple;
using tuples::GPYConfig;
using tuples::u64;

namespace {

bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// admissibility by exhaustive residue checking over all primes <= r
bool admissible_oracle(const std::vector<u64>& t) {
  for (u64 p = 2; p <= t.size(); ++p) {
    if (!trial_prime(p)) continue;
    std::set<u64> res;
    for (u64 h : t) res.insert(h % p);
    if (res.size() == p) return false;
  }
  return true;
}

int mobius_oracle(u64 n) {
  int sign = 1;
  for (u64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  if (n > 1) sign = -sign;
  return sign;
}

// linear-scan oracle for the GPY weight
double gpy_weight_oracle(u64 n, const std::vector<u64>& offsets,
                         const GPYConfig& cfg) {
  u64 prod = 1;
  for (u64 h : offsets) prod *= n + h;
  double sum = 0;
  for (u64 d = 1; static_cast<double>(d) < cfg.R; ++d) {
    if (prod % d != 0) continue;
    const int mu = mobius_oracle(d);
    if (mu == 0) continue;
    sum += mu * std::pow(std::log(cfg.R / static_cast<double>(d)),
                         static_cast<double>(cfg.k));
  }
  return sum * sum;
}

}  // namespace

TEST_CASE("is_admissible") {
  CHECK_FALSE(tuples::is_admissible({0, 2, 4}));  // fills every class mod 3
  CHECK(tuples::is_admissible({0, 2, 6}));
  CHECK(tuples::is_admissible({0}));
  CHECK(tuples::is_admissible({0, 2}));
  CHECK_FALSE(tuples::is_admissible({0, 1}));  // fills mod 2
}

TEST_CASE("is_admissible agrees with exhaustive residue checking") {
  // all 3-subsets of [0, 20], strided 4-subsets, random 5/6-subsets of [0, 50]
  for (u64 a = 0; a <= 20; ++a)
    for (u64 b = a + 1; b <= 20; ++b)
      for (u64 c = b + 1; c <= 20; ++c) {
        CHECK(tuples::is_admissible({a, b, c}) == admissible_oracle({a, b, c}));
        for (u64 d = c + 1; d <= 20; d += 3)
          CHECK(tuples::is_admissible({a, b, c, d}) ==
                admissible_oracle({a, b, c, d}));
      }
  auto rng = rng::SplitMix64(5);
  for (int trial = 0; trial < 3000; ++trial) {
    std::set<u64> s;
    const std::size_t r = 5 + rng.below(2);
    while (s.size() < r) s.insert(rng.below(51));
    std::vector<u64> t(s.begin(), s.end());
    CHECK(tuples::is_admissible(t) == admissible_oracle(t));
  }
}

TEST_CASE("first_primes_tuple") {
  CHECK(tuples::first_primes_tuple(1).offsets == std::vector<u64>{2});
  CHECK(tuples::first_primes_tuple(2).offsets == std::vector<u64>{3, 5});
  CHECK(tuples::first_primes_tuple(3).offsets == std::vector<u64>{5, 7, 11});
  for (unsigned r = 1; r <= 40; ++r) {
    auto t = tuples::first_primes_tuple(r);
    REQUIRE(t.offsets.size() == r);
    CHECK(tuples::is_admissible(t.offsets));
    CHECK(t.offsets.back() <= 2ull * r * r);  // contained in [2r^2]
    for (u64 h : t.offsets) CHECK((trial_prime(h) && h > r));
  }
}

TEST_CASE("gpy_lambda") {
  GPYConfig cfg{2, 10.0};
  CHECK_THAT(tuples::gpy_lambda(1, cfg),
             Catch::Matchers::WithinRel(std::pow(std::log(10.0), 2), 1e-12));
  CHECK(tuples::gpy_lambda(4, cfg) == 0.0);   // mu(4) = 0
  CHECK(tuples::gpy_lambda(10, cfg) == 0.0);  // d >= R
  // frozen by direct evaluation: mu(6) (log(10/6))^2
  CHECK_THAT(tuples::gpy_lambda(6, cfg),
             Catch::Matchers::WithinRel(std::pow(std::log(10.0 / 6.0), 2), 1e-12));
}

TEST_CASE("gpy_weight") {
  // R = 2: only d = 1 survives
  auto t = tuples::make_tuple({0, 2});
  GPYConfig tight{2, 2.0};
  CHECK_THAT(tuples::gpy_weight(9, t, tight),
             Catch::Matchers::WithinRel(std::pow(std::log(2.0), 4), 1e-12));

  // n = 1, t = (0,2), R = 4, k = 2: divisors of 3 below 4 are {1, 3};
  // frozen from the independent oracle
  GPYConfig cfg{2, 4.0};
  const double want = gpy_weight_oracle(1, {0, 2}, cfg);
  CHECK_THAT(tuples::gpy_weight(1, t, cfg), Catch::Matchers::WithinRel(want, 1e-12));
  const double direct = std::pow(std::pow(std::log(4.0), 2) -
                                     std::pow(std::log(4.0 / 3.0), 2),
                                 2);
  CHECK_THAT(tuples::gpy_weight(1, t, cfg), Catch::Matchers::WithinRel(direct, 1e-12));

  // n = 29: 29 and 31 both prime and > R, so only d = 1: w = (log R)^{2k}
  GPYConfig cfg5{2, 5.0};
  CHECK_THAT(tuples::gpy_weight(29, t, cfg5),
             Catch::Matchers::WithinRel(std::pow(std::log(5.0), 4), 1e-12));
}

TEST_CASE("gpy_weight matches the oracle on random instances") {
  auto rng = rng::SplitMix64(77);
  for (int trial = 0; trial < 120; ++trial) {
    const unsigned k = 1 + static_cast<unsigned>(rng.below(3));
    std::set<u64> s;
    while (s.size() < k) s.insert(rng.below(13));
    std::vector<u64> offs(s.begin(), s.end());
    if (!tuples::is_admissible(offs)) continue;
    GPYConfig cfg{k, 2.0 + static_cast<double>(rng.below(28))};
    const u64 n = 1 + rng.below(400);
    auto t = tuples::make_tuple(offs);
    const double got = tuples::gpy_weight(n, t, cfg);
    const double want = gpy_weight_oracle(n, offs, cfg);
    CHECK(got >= 0.0);
    CHECK_THAT(got, Catch::Matchers::WithinRel(want, 1e-9) ||
                        Catch::Matchers::WithinAbs(want, 1e-12));
  }
}

TEST_CASE("s_statistic") {
  auto t = tuples::make_tuple({0, 2});
  GPYConfig cfg{2, 5.0};

  // rho = 0 with positive weights somewhere
  auto s0 = tuples::s_statistic(10, 0.0, t, cfg);
  CHECK(s0.value > 0.0);
  REQUIRE(s0.witness.has_value());

  // exact value by enumeration
  auto s1 = tuples::s_statistic(10, 1.0, t, cfg);
  double expect = 0.0;
  for (u64 n = 10; n <= 20; ++n) {
    unsigned count = (trial_prime(n) ? 1 : 0) + (trial_prime(n + 2) ? 1 : 0);
    expect += (static_cast<double>(count) - 1.0) * gpy_weight_oracle(n, {0, 2}, cfg);
  }
  CHECK_THAT(s1.value, Catch::Matchers::WithinRel(expect, 1e-9));
  if (s1.value > 0.0) {
    REQUIRE(s1.witness.has_value());
    const u64 w = *s1.witness;
    CHECK((trial_prime(w) && trial_prime(w + 2)));  // twin pair witness
  }

  // rho >= k forces S <= 0
  auto s2 = tuples::s_statistic(10, 2.0, t, cfg);
  CHECK(s2.value <= 0.0);
  CHECK_FALSE(s2.witness.has_value());
}

TEST_CASE("positive s_statistic always yields a checkable witness") {
  auto rng = rng::SplitMix64(99);
  for (int trial = 0; trial < 25; ++trial) {
    const u64 N = 5 + rng.below(80);
    const double rho = 0.5 + 0.5 * static_cast<double>(rng.below(3));
    auto t = tuples::make_tuple({0, 2, 6});
    GPYConfig cfg{3, 4.0 + static_cast<double>(rng.below(20))};
    auto s = tuples::s_statistic(N, rho, t, cfg);
    if (s.value > 0.0) {
      REQUIRE(s.witness.has_value());
      unsigned count = 0;
      for (u64 h : t.offsets)
        if (trial_prime(*s.witness + h)) ++count;
      CHECK(count >= static_cast<unsigned>(std::floor(rho)) + 1);
    }
  }
}
