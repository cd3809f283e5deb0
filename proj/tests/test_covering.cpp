#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "gapforge/covering.hpp"

using namespace gapforge;
using covering::CongruenceClass;
using covering::CoveringSystem;
using covering::ResidualSet;
using covering::u64;

namespace {

// exhaustive search: can (0, y] be covered by one class per listed prime?
bool coverable_oracle(u64 y, const std::vector<u64>& primes_list,
                      std::vector<char> hit, std::size_t idx) {
  bool all = true;
  for (u64 v = 1; v <= y; ++v)
    if (!hit[v]) {
      all = false;
      break;
    }
  if (all) return true;
  if (idx == primes_list.size()) return false;
  const u64 p = primes_list[idx];
  for (u64 r = 0; r < p; ++r) {
    std::vector<char> next = hit;
    for (u64 v = (r == 0 ? p : r); v <= y; v += p) next[v] = 1;
    if (coverable_oracle(y, primes_list, next, idx + 1)) return true;
  }
  return false;
}

bool coverable_oracle(u64 y, const std::vector<u64>& primes_list) {
  return coverable_oracle(y, primes_list, std::vector<char>(y + 1, 0), 0);
}

std::set<u64> ground_truth_residual(u64 y,
                                    const std::vector<CongruenceClass>& classes) {
  std::set<u64> rem;
  for (u64 v = 1; v <= y; ++v) rem.insert(v);
  for (const auto& c : classes)
    for (u64 v = (c.residue == 0 ? c.modulus : c.residue); v <= y; v += c.modulus)
      rem.erase(v);
  return rem;
}

}  // namespace

TEST_CASE("stage_residue_zero") {
  ResidualSet R(10);
  auto cls = covering::stage_residue_zero(R, {2, 3});
  CHECK(R.elements() == std::vector<u64>{1, 5, 7});
  CHECK(cls.size() == 2);

  ResidualSet empty(0);
  covering::stage_residue_zero(empty, {2, 5});
  CHECK(empty.empty());

  ResidualSet R6(6);
  covering::stage_residue_zero(R6, {5});
  CHECK(R6.elements() == std::vector<u64>{1, 2, 3, 4, 6});

  ResidualSet dup(4);
  CHECK_THROWS(covering::stage_residue_zero(dup, {3, 3}));
}

TEST_CASE("stage_greedy picks maximal classes with smallest-residue ties") {
  ResidualSet R(11);
  for (u64 v : {2, 3, 4, 6, 8, 9, 10}) R.remove(v);  // leaves {1,5,7,11}
  auto cls = covering::stage_greedy(R, {3});
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].residue == 1);  // {1,7} ties {5,11}, smaller residue wins
  CHECK(R.elements() == std::vector<u64>{5, 11});

  ResidualSet single(4);
  for (u64 v : {1, 2, 3}) single.remove(v);
  auto c2 = covering::stage_greedy(single, {5});
  CHECK(c2[0].residue == 4);
  CHECK(single.empty());

  ResidualSet r3(3);
  auto c3 = covering::stage_greedy(r3, {2});
  CHECK(c3[0].residue == 1);
  CHECK(r3.elements() == std::vector<u64>{2});
}

TEST_CASE("greedy choice is always a maximizer") {
  // replay each greedy step against exhaustive residue counting
  for (u64 y : {20ull, 37ull, 64ull}) {
    ResidualSet R(y);
    covering::stage_residue_zero(R, {2});
    for (u64 p : {3ull, 5ull, 7ull, 11ull}) {
      ResidualSet before = R;
      auto cls = covering::stage_greedy(R, {p});
      const u64 chosen = before.count_class(p, cls[0].residue);
      for (u64 r = 0; r < p; ++r) CHECK(before.count_class(p, r) <= chosen);
    }
  }
}

TEST_CASE("stage_weak assigns elements to primes one-to-one") {
  ResidualSet R(9);
  for (u64 v : {1, 2, 3, 4, 5, 6, 8}) R.remove(v);  // leaves {7,9}
  auto res = covering::stage_weak(R, {11, 13});
  REQUIRE(res.classes.size() == 2);
  CHECK(res.classes[0] == CongruenceClass{11, 7, 4});
  CHECK(res.classes[1] == CongruenceClass{13, 9, 4});
  CHECK(R.empty());
  CHECK(res.hit_counts.at(11) == 1);
  CHECK(res.hit_counts.at(13) == 1);

  ResidualSet none(5);
  for (u64 v = 1; v <= 5; ++v) none.remove(v);
  auto r2 = covering::stage_weak(none, {7});
  CHECK(r2.classes[0].residue == 0);
  CHECK(r2.hit_counts.at(7) == 0);

  ResidualSet part(8);
  for (u64 v : {1, 2, 3, 4, 7}) part.remove(v);  // leaves {5,6,8}
  auto r3 = covering::stage_weak(part, {17, 19});
  CHECK(part.elements() == std::vector<u64>{8});  // partial completion
}

TEST_CASE("build_erdos_covering") {
  SECTION("empty interval is trivially complete") {
    auto cs = covering::build_erdos_covering(5, 0);
    CHECK(cs.complete);
    CHECK(covering::verify_covering(cs).covered);
  }

  SECTION("x=3, y=2 cannot complete") {
    auto cs = covering::build_erdos_covering(3, 2);
    CHECK_FALSE(cs.complete);
  }

  SECTION("completion result is consistent with the exhaustive oracle") {
    for (u64 x : {8ull, 12ull}) {
      for (u64 y = 2; y <= 14; ++y) {
        auto cs = covering::build_erdos_covering(x, y);
        auto primes_list = primes::sieve_segment(0, x);
        if (cs.complete) {
          CHECK(covering::verify_covering(cs).covered);
          CHECK(coverable_oracle(y, primes_list));
        }
      }
    }
  }

  SECTION("moduli are pairwise distinct and cover every prime below x") {
    auto cs = covering::build_erdos_covering(30, 40);
    std::set<u64> mods;
    for (const auto& c : cs.classes) CHECK(mods.insert(c.modulus).second);
    auto want = primes::sieve_segment(0, 30);
    CHECK(mods == std::set<u64>(want.begin(), want.end()));
  }
}

TEST_CASE("residual snapshots equal set-difference ground truth") {
  for (u64 x : {12ull, 30ull, 60ull}) {
    for (u64 y : {10ull, 50ull, 200ull}) {
      covering::StageTrace trace;
      auto cs = covering::build_erdos_covering(x, y, nullptr, &trace);
      REQUIRE(trace.residual_after.size() == 4);
      std::vector<CongruenceClass> seen;
      std::size_t k = 0;
      for (int stage = 1; stage <= 4; ++stage) {
        while (k < cs.classes.size() && cs.classes[k].stage == stage)
          seen.push_back(cs.classes[k++]);
        auto truth = ground_truth_residual(y, seen);
        auto got = trace.residual_after[stage - 1];
        CHECK(std::set<u64>(got.begin(), got.end()) == truth);
      }
    }
  }
}

TEST_CASE("verify_covering") {
  CoveringSystem full;
  full.y = 10;
  full.classes = {{2, 0, 1}, {2, 1, 1}};  // full residue system mod 2
  CHECK(covering::verify_covering(full).covered);

  CoveringSystem gap;
  gap.y = 10;
  gap.classes = {{2, 0, 1}, {3, 0, 1}};
  auto r = covering::verify_covering(gap);
  CHECK_FALSE(r.covered);
  CHECK(r.first_uncovered == 1);

  CoveringSystem empty;
  empty.y = 0;
  CHECK(covering::verify_covering(empty).covered);
}

TEST_CASE("complete systems always verify") {
  int complete_seen = 0;
  for (u64 x : {10ull, 20ull, 30ull, 40ull, 50ull})
    for (u64 y : {4ull, 8ull, 16ull, 24ull, 40ull}) {
      auto cs = covering::build_erdos_covering(x, y);
      if (cs.complete) {
        ++complete_seen;
        CHECK(covering::verify_covering(cs).covered);
      }
    }
  CHECK(complete_seen > 0);
}

TEST_CASE("hitting_numbers") {
  ResidualSet R(11);
  for (u64 v : {1, 2, 3, 4, 6, 7, 8, 9, 10}) R.remove(v);  // leaves {5,11}
  CoveringSystem cs;
  cs.y = 11;
  cs.classes = {{3, 2, 4}};
  CHECK(covering::hitting_numbers(cs, R).at(3) == 2);

  ResidualSet empty(6);
  for (u64 v = 1; v <= 6; ++v) empty.remove(v);
  CHECK(covering::hitting_numbers(cs, empty).at(3) == 0);

  ResidualSet ten(10);
  CoveringSystem c5;
  c5.y = 10;
  c5.classes = {{5, 0, 1}};
  CHECK(covering::hitting_numbers(c5, ten).at(5) == 2);  // 5 and 10
}

TEST_CASE("maximal completable y is monotone in x") {
  auto max_complete_y = [](u64 x) {
    u64 best = 0;
    for (u64 y = 1; y <= 6 * x; ++y)
      if (covering::build_erdos_covering(x, y).complete) best = y;
    return best;
  };
  u64 prev = 0;
  for (u64 x = 10; x <= 200; x += 10) {
    const u64 cur = max_complete_y(x);
    CHECK(cur >= prev);
    prev = cur;
  }
}
