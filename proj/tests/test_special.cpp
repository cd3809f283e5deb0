#include <catch2/catch_amalgamated.hpp>

#include <mpfr.h>

#include <cmath>
#include <set>
#include <vector>

#include "gapforge/special_seq.hpp"

using namespace gapforge;
using special::BeattyParams;
using special::Int;
using special::PSParams;
using special::QuadVal;
using special::Rat;
using special::u64;

namespace {

// high-precision directed-rounding oracle for floor(sqrt(arg) * n + beta),
// fully independent of the integer-exact path
long beatty_floor_mpfr(u64 arg, u64 n, double beta) {
  mpfr_t lo, hi;
  mpfr_init2(lo, 512);
  mpfr_init2(hi, 512);
  mpfr_sqrt_ui(lo, arg, MPFR_RNDD);
  mpfr_sqrt_ui(hi, arg, MPFR_RNDU);
  mpfr_mul_ui(lo, lo, n, MPFR_RNDD);
  mpfr_mul_ui(hi, hi, n, MPFR_RNDU);
  mpfr_add_d(lo, lo, beta, MPFR_RNDD);
  mpfr_add_d(hi, hi, beta, MPFR_RNDU);
  mpfr_floor(lo, lo);
  mpfr_floor(hi, hi);
  const long flo = mpfr_get_si(lo, MPFR_RNDD);
  const long fhi = mpfr_get_si(hi, MPFR_RNDD);
  mpfr_clear(lo);
  mpfr_clear(hi);
  REQUIRE(flo == fhi);  // 512 bits decide every floor at this scale
  return flo;
}

long ps_floor_mpfr(u64 l, unsigned long c_num, unsigned long c_den) {
  mpfr_t lo, hi, e;
  mpfr_init2(lo, 512);
  mpfr_init2(hi, 512);
  mpfr_init2(e, 512);
  mpfr_set_ui(lo, l, MPFR_RNDD);
  mpfr_set_ui(hi, l, MPFR_RNDU);
  mpfr_set_ui(e, c_num, MPFR_RNDN);
  mpfr_div_ui(e, e, c_den, MPFR_RNDN);
  mpfr_pow(lo, lo, e, MPFR_RNDD);
  mpfr_pow(hi, hi, e, MPFR_RNDU);
  mpfr_floor(lo, lo);
  mpfr_floor(hi, hi);
  const long flo = mpfr_get_si(lo, MPFR_RNDD);
  const long fhi = mpfr_get_si(hi, MPFR_RNDD);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(e);
  REQUIRE(flo == fhi);
  return flo;
}

}  // namespace

TEST_CASE("QuadVal basics") {
  auto sqrt2 = QuadVal::parse("sqrt2");
  CHECK_FALSE(sqrt2.is_rational());
  CHECK(sqrt2.floor() == 1);
  CHECK(sqrt2.sign() == 1);

  auto r = QuadVal::parse("22/7");
  CHECK(r.is_rational());
  CHECK(r.floor() == 3);

  auto dec = QuadVal::parse("1.25");
  CHECK(dec.as_rational() == Rat(5, 4));

  auto phi = QuadVal::parse("(1+sqrt5)/2");
  CHECK(phi.floor() == 1);
  CHECK_THAT(phi.to_double(), Catch::Matchers::WithinAbs(1.6180339887, 1e-9));

  auto neg = QuadVal::parse("(1-sqrt5)/2");
  CHECK(neg.sign() == -1);
  CHECK(neg.floor() == -1);

  // perfect squares fold to rationals
  auto four = QuadVal::parse("sqrt4");
  CHECK(four.is_rational());
  CHECK(four.as_rational() == Rat(2));

  // reciprocal: 1/phi = phi - 1
  auto inv = phi.reciprocal();
  CHECK(inv.compare(Rat(1)) < 0);
  CHECK_THAT(inv.to_double(), Catch::Matchers::WithinAbs(0.6180339887, 1e-9));
}

TEST_CASE("beatty floors") {
  auto id = BeattyParams::make(QuadVal(Rat(1)));
  for (u64 n = 1; n <= 5; ++n) CHECK(special::beatty(n, id) == n);

  auto sqrt2 = BeattyParams::make(QuadVal::parse("sqrt2"));
  std::vector<long> want = {1, 2, 4, 5, 7};
  for (u64 n = 1; n <= 5; ++n)
    CHECK(special::beatty(n, sqrt2) == want[n - 1]);

  // integer alpha: a beta shift of +1 shifts every value by exactly 1
  auto two = BeattyParams::make(QuadVal(Rat(2)), Rat(0));
  auto two_shift = BeattyParams::make(QuadVal(Rat(2)), Rat(1));
  for (u64 n = 1; n <= 20; ++n)
    CHECK(special::beatty(n, two_shift) == special::beatty(n, two) + 1);

  // rational alpha floors are exact (22/7 at n = 7 is exactly 22)
  auto r = BeattyParams::make(QuadVal::parse("22/7"));
  CHECK(special::beatty(u64(7), r) == 22);
  CHECK(special::beatty(u64(6), r) == 18);  // 132/7 = 18.857...
}

TEST_CASE("beatty differences lie in {floor(alpha), ceil(alpha)}") {
  for (const char* alpha : {"sqrt2", "sqrt3", "(1+sqrt5)/2", "3/2"}) {
    auto params = BeattyParams::make(QuadVal::parse(alpha), Rat(1, 3));
    Int prev = special::beatty(u64(1), params);
    const Int lo = params.alpha.floor();
    for (u64 n = 2; n <= 500; ++n) {
      Int cur = special::beatty(n, params);
      Int diff = cur - prev;
      CHECK((diff == lo || diff == lo + 1));
      CHECK(cur > prev);  // strictly increasing for alpha >= 1
      prev = cur;
    }
  }
}

TEST_CASE("beatty_primes") {
  auto all = BeattyParams::make(QuadVal(Rat(1)));
  auto ps_all = special::beatty_primes(50, all);
  std::vector<u64> primes_upto50;
  for (const auto& sp : ps_all) primes_upto50.push_back(sp.value);
  CHECK(primes_upto50 == primes::sieve_segment(0, 51));

  auto sqrt2 = BeattyParams::make(QuadVal::parse("sqrt2"));
  auto got = special::beatty_primes(20, sqrt2);
  std::vector<u64> values;
  for (const auto& sp : got) {
    values.push_back(sp.value);
    CHECK(special::beatty(sp.witness, sqrt2) == sp.value);  // witness verified
    CHECK(primes::is_prime(sp.value));
  }
  CHECK(values == std::vector<u64>{2, 5, 7, 11, 19});

  auto evens = BeattyParams::make(QuadVal(Rat(2)));
  auto got2 = special::beatty_primes(30, evens);
  REQUIRE(got2.size() == 1);
  CHECK(got2[0].value == 2);
}

TEST_CASE("beatty_primes matches the high-precision oracle at 10^4") {
  auto sqrt2 = BeattyParams::make(QuadVal::parse("sqrt2"));
  auto got = special::beatty_primes(10000, sqrt2);
  std::set<u64> got_set;
  for (const auto& sp : got) got_set.insert(sp.value);

  std::set<u64> oracle;
  for (u64 n = 1;; ++n) {
    const long v = beatty_floor_mpfr(2, n, 0.0);
    if (v > 10000) break;
    if (v >= 2 && primes::is_prime(static_cast<u64>(v)))
      oracle.insert(static_cast<u64>(v));
  }
  CHECK(got_set == oracle);
}

TEST_CASE("beatty membership witness") {
  auto sqrt2 = BeattyParams::make(QuadVal::parse("sqrt2"));
  CHECK(special::beatty_witness(Int(7), sqrt2).has_value());
  CHECK_FALSE(special::beatty_witness(Int(3), sqrt2).has_value());
  CHECK_FALSE(special::beatty_witness(Int(13), sqrt2).has_value());
  // large value round trip
  auto params = BeattyParams::make(QuadVal::parse("sqrt3"), Rat(1, 2));
  Int big_n("123456789123456789");
  Int v = special::beatty(big_n, params);
  auto w = special::beatty_witness(v, params);
  REQUIRE(w.has_value());
  CHECK(*w == big_n);
}

TEST_CASE("continued fractions and convergents") {
  // sqrt2 = [1; 2, 2, 2, ...]
  auto cf = special::continued_fraction(QuadVal::parse("sqrt2"), 10);
  CHECK(cf.terms[0] == 1);
  for (std::size_t i = 1; i < cf.terms.size(); ++i) CHECK(cf.terms[i] == 2);
  CHECK_FALSE(cf.terminated);

  // golden ratio: all ones
  auto cfg = special::continued_fraction(QuadVal::parse("(1+sqrt5)/2"), 12);
  for (const auto& t : cfg.terms) CHECK(t == 1);

  // rational terminates
  auto cfr = special::continued_fraction(QuadVal::parse("22/7"), 10);
  CHECK(cfr.terminated);

  // convergents satisfy |alpha - p/q| < 1/q^2, checked in exact arithmetic:
  // -1 < (alpha q - p) q < 1
  auto alpha = QuadVal::parse("sqrt2");
  for (const auto& [p, q] : cf.convergents) {
    QuadVal err = alpha.scaled_by_int(q).plus_rational(Rat(-p)).scaled_by_int(q);
    CHECK(err.compare(Rat(1)) < 0);
    CHECK(err.compare(Rat(-1)) > 0);
  }
}

TEST_CASE("irrationality type estimates") {
  auto golden = special::irrationality_type_estimate(
      QuadVal::parse("(1+sqrt5)/2"), 30);
  CHECK_THAT(golden.tau_hat, Catch::Matchers::WithinAbs(1.0, 0.1));

  auto root2 = special::irrationality_type_estimate(QuadVal::parse("sqrt2"), 30);
  CHECK_THAT(root2.tau_hat, Catch::Matchers::WithinAbs(1.0, 0.1));

  CHECK_THROWS_AS(
      special::irrationality_type_estimate(QuadVal::parse("22/7"), 10),
      special::RationalAlphaError);
  CHECK_THROWS(special::irrationality_type_estimate(QuadVal::parse("sqrt2"), 2));
}

TEST_CASE("ps values and primes") {
  // c = 1: identity
  auto c1 = PSParams::make(Rat(1));
  auto got1 = special::ps_primes(50, c1);
  std::vector<u64> vals;
  for (const auto& sp : got1) vals.push_back(sp.value);
  CHECK(vals == primes::sieve_segment(0, 51));

  // c = 2: squares are composite beyond 1
  auto c2 = PSParams::make(Rat(2));
  CHECK(special::ps_primes(100, c2).empty());
  CHECK_FALSE(c2.in_theorem_range());
  CHECK(PSParams::make(Rat(21, 20)).in_theorem_range());

  // c = 1.1 on (0, 30]: frozen from enumeration with exact roots
  auto c11 = PSParams::make(Rat(11, 10));
  auto got = special::ps_primes(30, c11);
  std::vector<u64> values;
  for (const auto& sp : got) {
    values.push_back(sp.value);
    CHECK(special::ps_value(sp.witness, c11) == sp.value);
    CHECK(primes::is_prime(sp.value));
  }
  CHECK(values == std::vector<u64>{2, 3, 5, 7, 11, 13, 19, 29});
  // the float trap at l = 20: 20^1.1 = 26.9999..., floor 26 not 27
  CHECK(special::ps_value(u64(20), c11) == 26);
}

TEST_CASE("ps_primes matches the high-precision oracle at 10^4") {
  auto c = PSParams::make(Rat(21, 20));  // 1.05
  auto got = special::ps_primes(10000, c);
  std::set<u64> got_set;
  for (const auto& sp : got) got_set.insert(sp.value);

  std::set<u64> oracle;
  for (u64 l = 1;; ++l) {
    const long v = ps_floor_mpfr(l, 21, 20);
    if (v > 10000) break;
    if (v >= 2 && primes::is_prime(static_cast<u64>(v)))
      oracle.insert(static_cast<u64>(v));
  }
  CHECK(got_set == oracle);
}

TEST_CASE("ps counting property") {
  // #{l : floor(l^c) <= N} = floor(N^{1/c}) +- 1
  for (auto [num, den] :
       {std::pair<int, int>{21, 20}, std::pair<int, int>{11, 10},
        std::pair<int, int>{3, 2}}) {
    auto c = PSParams::make(Rat(num, den));
    for (u64 N : {50ull, 500ull, 4000ull}) {
      u64 count = 0;
      for (u64 l = 1;; ++l) {
        if (special::ps_value(l, c) > static_cast<unsigned long>(N)) break;
        ++count;
      }
      Int nq;
      mpz_ui_pow_ui(nq.get_mpz_t(), N, static_cast<unsigned long>(den));
      Int root;
      mpz_root(root.get_mpz_t(), nq.get_mpz_t(), static_cast<unsigned long>(num));
      const u64 want = to_u64(root);
      CHECK(count + 1 >= want);
      CHECK(count <= want + 1);
    }
  }
}

TEST_CASE("restricted_column_scan filters winners by family") {
  auto cs = covering::build_erdos_covering(14, 8);
  REQUIRE(cs.complete);
  auto cert = crtgap::lift_certificate(crtgap::certify_gap(cs), 1);
  auto sys = kpower::lift_to_kpower(cert, 2);
  auto M = kpower::matrix_from_system(sys, 300);
  auto scan = kpower::scan_rows(M, sys.exceptional, sys.witnesses, 2);

  // family = all primes: identical to the winner set
  auto all = special::restricted_column_scan(M, scan.winners,
                                             special::SequenceFamily::all());
  CHECK(all == scan.winners);

  // Beatty(sqrt2) filter: kept rows have a verified witness, dropped rows
  // have none
  auto fam = special::SequenceFamily::beatty(
      BeattyParams::make(QuadVal::parse("sqrt2")));
  auto kept = special::restricted_column_scan(M, scan.winners, fam);
  std::set<u64> kept_set(kept.begin(), kept.end());
  for (u64 r : scan.winners) {
    const bool member =
        special::beatty_witness(M.base(r), fam.beatty_params).has_value();
    CHECK(member == (kept_set.count(r) > 0));
  }

  // empty winner set stays empty
  auto none = special::restricted_column_scan(M, {}, fam);
  CHECK(none.empty());
}
