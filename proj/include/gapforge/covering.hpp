#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "gapforge/primes.hpp"

namespace gapforge::covering {

using u64 = std::uint64_t;

struct CongruenceClass {
  u64 modulus = 0;  // prime
  u64 residue = 0;  // < modulus
  int stage = 0;

  friend bool operator==(const CongruenceClass&, const CongruenceClass&) = default;
};

// Integers of (0, y] not yet removed by any sieving stage.
class ResidualSet {
 public:
  explicit ResidualSet(u64 y) : y_(y), in_(y + 1, 1), count_(y) {
    if (y_ + 1 == 0) throw std::invalid_argument("ResidualSet: y overflow");
    in_[0] = 0;
  }

  u64 y() const { return y_; }
  u64 size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(u64 v) const { return v >= 1 && v <= y_ && in_[v]; }

  void remove(u64 v) {
    if (contains(v)) {
      in_[v] = 0;
      --count_;
    }
  }

  u64 count_class(u64 m, u64 r) const {
    u64 c = 0;
    for (u64 v = first_in_class(m, r); v <= y_ && v >= 1; v += m)
      if (in_[v]) ++c;
    return c;
  }

  u64 remove_class(u64 m, u64 r) {
    u64 c = 0;
    for (u64 v = first_in_class(m, r); v <= y_ && v >= 1; v += m)
      if (in_[v]) {
        in_[v] = 0;
        ++c;
      }
    count_ -= c;
    return c;
  }

  std::vector<u64> elements() const {
    std::vector<u64> out;
    out.reserve(count_);
    for (u64 v = 1; v <= y_; ++v)
      if (in_[v]) out.push_back(v);
    return out;
  }

  std::optional<u64> smallest() const {
    for (u64 v = 1; v <= y_; ++v)
      if (in_[v]) return v;
    return std::nullopt;
  }

 private:
  u64 first_in_class(u64 m, u64 r) const { return r == 0 ? m : r; }

  u64 y_;
  std::vector<char> in_;
  u64 count_;
};

struct CoveringSystem {
  u64 x = 0;
  u64 y = 0;
  bool complete = false;
  std::vector<CongruenceClass> classes;
};

// Stage labels follow the construction order: residue-zero passes on the
// small and large primes, a greedy pass on the middle primes, and a weak
// pass (one residual element per prime) on the rest.
struct StagePlan {
  u64 x = 0;
  u64 y = 0;
  double small_exponent = 0.25;  // stage 1: p <= x^small_exponent
  double z_fraction = 0.5;       // weak stage: p > z_fraction * x

  static constexpr int kSmallZero = 1;
  static constexpr int kLargeZero = 2;
  static constexpr int kGreedy = 3;
  static constexpr int kWeak = 4;

  StagePlan() = default;
  StagePlan(u64 x_, u64 y_) : x(x_), y(y_) {}

  double small_bound() const {
    return std::pow(static_cast<double>(x), small_exponent);
  }
  double z_bound() const { return z_fraction * static_cast<double>(x); }
  double greedy_bound() const {
    return std::min(static_cast<double>(y), z_bound());
  }

  int stage_of(u64 p) const {
    const double pd = static_cast<double>(p);
    if (pd <= small_bound()) return kSmallZero;
    if (pd <= greedy_bound()) return kGreedy;
    if (pd <= z_bound()) return kLargeZero;
    return kWeak;
  }

  // Disjoint stage lists whose union is the primes below x.
  std::array<std::vector<u64>, 4> partition() const {
    std::array<std::vector<u64>, 4> out;
    for (u64 p : primes::sieve_segment(0, x)) out[stage_of(p) - 1].push_back(p);
    return out;
  }
};

namespace detail {

inline void require_fresh_moduli(const std::vector<u64>& primes_list,
                                 const std::set<u64>* used) {
  std::set<u64> seen;
  for (u64 p : primes_list) {
    if (!seen.insert(p).second)
      throw std::invalid_argument("duplicate modulus in stage prime list");
    if (used && used->count(p))
      throw std::invalid_argument("modulus already used by an earlier stage");
  }
}

}  // namespace detail

// Residue 0 for every prime in the list; removes the multiples.
inline std::vector<CongruenceClass> stage_residue_zero(
    ResidualSet& R, const std::vector<u64>& primes_list, int stage = 1,
    const std::set<u64>* used = nullptr) {
  detail::require_fresh_moduli(primes_list, used);
  std::vector<CongruenceClass> out;
  out.reserve(primes_list.size());
  for (u64 p : primes_list) {
    R.remove_class(p, 0);
    out.push_back({p, 0, stage});
  }
  return out;
}

// For each prime in ascending order, the residue class holding the most
// residual elements (ties to the smallest residue).
inline std::vector<CongruenceClass> stage_greedy(
    ResidualSet& R, std::vector<u64> primes_list, int stage = 3,
    const std::set<u64>* used = nullptr) {
  detail::require_fresh_moduli(primes_list, used);
  std::sort(primes_list.begin(), primes_list.end());
  std::vector<CongruenceClass> out;
  out.reserve(primes_list.size());
  std::vector<u64> counts;
  for (u64 p : primes_list) {
    counts.assign(p, 0);
    for (u64 v : R.elements()) ++counts[v % p];
    u64 best = 0;
    for (u64 r = 1; r < p; ++r)
      if (counts[r] > counts[best]) best = r;
    R.remove_class(p, best);
    out.push_back({p, best, stage});
  }
  return out;
}

struct WeakStageResult {
  std::vector<CongruenceClass> classes;
  std::map<u64, u64> hit_counts;  // modulus -> removed count
};

// One residual element per prime, elements and primes both ascending;
// primes left over get residue 0.
inline WeakStageResult stage_weak(ResidualSet& R,
                                  std::vector<u64> primes_list, int stage = 4,
                                  const std::set<u64>* used = nullptr) {
  detail::require_fresh_moduli(primes_list, used);
  std::sort(primes_list.begin(), primes_list.end());
  WeakStageResult res;
  for (u64 p : primes_list) {
    const auto u = R.smallest();
    if (!u) {
      res.classes.push_back({p, 0, stage});
      res.hit_counts[p] = 0;
      continue;
    }
    const u64 r = *u % p;
    const u64 hits = R.remove_class(p, r);
    res.classes.push_back({p, r, stage});
    res.hit_counts[p] = hits;
  }
  return res;
}

struct StageTrace {
  // residual snapshot (as element lists) after each of the four stages
  std::vector<std::vector<u64>> residual_after;
};

// The four-stage pipeline: zero the small primes, zero the large primes,
// greedy on the middle, weak on the rest. Every prime below x carries
// exactly one class. complete == true iff the residual emptied.
inline CoveringSystem build_erdos_covering(u64 x, u64 y,
                                           const StagePlan* plan_in = nullptr,
                                           StageTrace* trace = nullptr) {
  StagePlan plan = plan_in ? *plan_in : StagePlan(x, y);
  plan.x = x;
  plan.y = y;
  const auto parts = plan.partition();
  ResidualSet R(y);
  CoveringSystem cs;
  cs.x = x;
  cs.y = y;
  std::set<u64> used;
  auto absorb = [&](std::vector<CongruenceClass>&& cls) {
    for (const auto& c : cls) used.insert(c.modulus);
    cs.classes.insert(cs.classes.end(), cls.begin(), cls.end());
    if (trace) trace->residual_after.push_back(R.elements());
  };
  absorb(stage_residue_zero(R, parts[0], StagePlan::kSmallZero, &used));
  absorb(stage_residue_zero(R, parts[1], StagePlan::kLargeZero, &used));
  absorb(stage_greedy(R, parts[2], StagePlan::kGreedy, &used));
  absorb(stage_weak(R, parts[3], StagePlan::kWeak, &used).classes);
  cs.complete = R.empty();
  return cs;
}

struct VerifyResult {
  bool covered = false;
  std::optional<u64> first_uncovered;
};

inline VerifyResult verify_covering(const CoveringSystem& cs) {
  std::vector<char> hit(cs.y + 1, 0);
  for (const auto& c : cs.classes) {
    const u64 start = c.residue == 0 ? c.modulus : c.residue;
    for (u64 v = start; v <= cs.y && v >= 1; v += c.modulus) hit[v] = 1;
  }
  for (u64 v = 1; v <= cs.y; ++v)
    if (!hit[v]) return {false, v};
  return {true, std::nullopt};
}

// Count of R_before elements inside each class.
inline std::map<u64, u64> hitting_numbers(const CoveringSystem& cs,
                                          const ResidualSet& R_before) {
  std::map<u64, u64> out;
  for (const auto& c : cs.classes)
    out[c.modulus] = R_before.count_class(c.modulus, c.residue);
  return out;
}

}  // namespace gapforge::covering
