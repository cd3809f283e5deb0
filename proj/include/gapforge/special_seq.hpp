#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapforge/bignat.hpp"
#include "gapforge/kpower.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::special {

using u64 = std::uint64_t;
using Int = mpz_class;
using Rat = mpq_class;

struct RationalAlphaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact real of the form (a + b sqrt(D)) / q with integer a, b, q > 0 and
// D zero or non-square. Everything downstream (floors, comparisons,
// continued fractions) stays in integer arithmetic, so no floor can ever be
// misrounded; values that would need adaptive precision simply do not
// arise.
class QuadVal {
 public:
  QuadVal() : a_(0), b_(0), q_(1), D_(0) {}

  explicit QuadVal(const Rat& r) : a_(r.get_num()), b_(0), q_(r.get_den()), D_(0) {
    normalize();
  }

  static QuadVal surd(Int a, Int b, Int D, Int q) {
    QuadVal v;
    v.a_ = std::move(a);
    v.b_ = std::move(b);
    v.D_ = std::move(D);
    v.q_ = std::move(q);
    if (v.q_ == 0) throw std::invalid_argument("zero denominator");
    v.normalize();
    return v;
  }

  // accepted: "sqrtN", "sqrtN/M", "(A+sqrtN)/M", "(A-sqrtN)/M", "A/B",
  // decimal and integer literals
  static QuadVal parse(const std::string& text);

  bool is_rational() const { return b_ == 0; }
  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& q() const { return q_; }
  const Int& D() const { return D_; }

  Rat as_rational() const {
    if (!is_rational()) throw std::logic_error("not rational");
    Rat r(a_, q_);
    r.canonicalize();
    return r;
  }

  QuadVal scaled_by_int(const Int& n) const {
    return surd(a_ * n, b_ * n, D_, q_);
  }

  QuadVal plus_rational(const Rat& r) const {
    return surd(a_ * r.get_den() + r.get_num() * q_, b_ * r.get_den(), D_,
                q_ * r.get_den());
  }

  QuadVal times_rational(const Rat& r) const {
    return surd(a_ * r.get_num(), b_ * r.get_num(), D_, q_ * r.get_den());
  }

  QuadVal reciprocal() const {
    if (sign() == 0) throw std::domain_error("reciprocal of zero");
    if (is_rational()) return surd(q_, 0, 0, a_);
    // 1 / ((a + b sqrt D)/q) = q (a - b sqrt D) / (a^2 - b^2 D)
    Int norm = a_ * a_ - b_ * b_ * D_;
    return surd(q_ * a_, -q_ * b_, D_, norm);
  }

  // sign of the value: -1, 0, +1
  int sign() const {
    const int sa = mpz_sgn(a_.get_mpz_t());
    const int sb = mpz_sgn(b_.get_mpz_t());
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 against b^2 D
    Int lhs = a_ * a_;
    Int rhs = b_ * b_ * D_;
    const int c = cmp(lhs, rhs);
    if (c == 0) return 0;  // impossible for non-square D, kept for safety
    return c > 0 ? sa : sb;
  }

  int compare(const Rat& r) const {
    QuadVal diff = plus_rational(-r);
    return diff.sign();
  }

  // exact floor
  Int floor() const {
    Int num_floor;
    if (b_ == 0) {
      num_floor = a_;
    } else {
      Int s2 = b_ * b_ * D_;
      Int s;
      mpz_sqrt(s.get_mpz_t(), s2.get_mpz_t());
      if (mpz_sgn(b_.get_mpz_t()) > 0)
        num_floor = a_ + s;  // b sqrt(D) in (s, s+1), irrational
      else
        num_floor = a_ - s - 1;
    }
    Int out;
    mpz_fdiv_q(out.get_mpz_t(), num_floor.get_mpz_t(), q_.get_mpz_t());
    return out;
  }

  double to_double() const {
    return (a_.get_d() + b_.get_d() * std::sqrt(D_.get_d())) / q_.get_d();
  }

 private:
  void normalize() {
    if (mpz_sgn(q_.get_mpz_t()) < 0) {
      a_ = -a_;
      b_ = -b_;
      q_ = -q_;
    }
    if (D_ < 0) throw std::invalid_argument("negative discriminant");
    if (D_ == 0) b_ = 0;
    if (b_ != 0) {
      // fold perfect-square D into the rational part
      Int root, rem;
      mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), D_.get_mpz_t());
      if (rem == 0) {
        a_ += b_ * root;
        b_ = 0;
        D_ = 0;
      }
    }
    if (b_ == 0) D_ = 0;
    Int g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q_.get_mpz_t());
    if (g > 1) {
      a_ /= g;
      b_ /= g;
      q_ /= g;
    }
  }

  Int a_, b_, q_, D_;
};

inline QuadVal QuadVal::parse(const std::string& text) {
  auto parse_int = [](const std::string& s) { return Int(s); };
  std::string t = text;
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t.empty()) throw std::invalid_argument("empty alpha expression");

  // (A+sqrtN)/M or (A-sqrtN)/M
  if (t.front() == '(') {
    const auto close = t.find(')');
    const auto slash = t.find('/', close);
    if (close == std::string::npos || slash == std::string::npos)
      throw std::invalid_argument("bad surd expression: " + text);
    const std::string inner = t.substr(1, close - 1);
    const Int M = parse_int(t.substr(slash + 1));
    const auto srt = inner.find("sqrt");
    if (srt == std::string::npos)
      throw std::invalid_argument("bad surd expression: " + text);
    std::string head = inner.substr(0, srt);  // "A+" or "A-"
    if (head.empty() || (head.back() != '+' && head.back() != '-'))
      throw std::invalid_argument("bad surd expression: " + text);
    const int sgn = head.back() == '-' ? -1 : 1;
    head.pop_back();
    const Int A = head.empty() ? Int(0) : parse_int(head);
    const Int N(inner.substr(srt + 4));
    return surd(A, Int(sgn), N, M);
  }

  // sqrtN or sqrtN/M
  if (t.rfind("sqrt", 0) == 0) {
    const auto slash = t.find('/');
    const Int N(t.substr(4, slash == std::string::npos ? std::string::npos
                                                       : slash - 4));
    const Int M = slash == std::string::npos ? Int(1) : parse_int(t.substr(slash + 1));
    return surd(Int(0), Int(1), N, M);
  }

  // decimal literal
  const auto dot = t.find('.');
  if (dot != std::string::npos) {
    const std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    const std::size_t frac = t.size() - dot - 1;
    Int num = parse_int(digits);
    Int den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return QuadVal(r);
  }

  // A/B or integer
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    Rat r(parse_int(t.substr(0, slash)), parse_int(t.substr(slash + 1)));
    r.canonicalize();
    return QuadVal(r);
  }
  return QuadVal(Rat(parse_int(t)));
}

struct BeattyParams {
  QuadVal alpha;            // > 0
  Rat beta = Rat(0);

  static BeattyParams make(const QuadVal& alpha, const Rat& beta = Rat(0)) {
    if (alpha.sign() <= 0)
      throw std::invalid_argument("beatty: alpha must be positive");
    return {alpha, beta};
  }
};

// floor(alpha n + beta), exact.
inline Int beatty(const Int& n, const BeattyParams& params) {
  return params.alpha.scaled_by_int(n).plus_rational(params.beta).floor();
}

inline Int beatty(u64 n, const BeattyParams& params) {
  return beatty(Int(static_cast<unsigned long>(n)), params);
}

// is v = floor(alpha n + beta) for some n >= 1? O(1): the candidate n sits
// within one step of (v - beta)/alpha.
inline std::optional<Int> beatty_witness(const Int& v, const BeattyParams& params) {
  Rat shift(v);
  shift -= params.beta;
  QuadVal ratio = params.alpha.reciprocal().times_rational(shift);
  const Int n0 = ratio.floor();
  for (Int n = n0 - 1; n <= n0 + 2; ++n) {
    if (n < 1) continue;
    if (beatty(n, params) == v) return n;
  }
  return std::nullopt;
}

struct SequencePrime {
  u64 value = 0;
  u64 witness = 0;  // the index n (Beatty) or base l (Piatetski-Shapiro)
};

// Primes among the Beatty values up to limit, each with its witness index.
inline std::vector<SequencePrime> beatty_primes(u64 limit,
                                                const BeattyParams& params) {
  if (limit < 2) throw std::invalid_argument("beatty_primes: limit >= 2");
  std::vector<SequencePrime> out;
  Int prev(-1);
  for (u64 n = 1;; ++n) {
    Int v = beatty(n, params);
    if (v > static_cast<unsigned long>(limit)) break;
    if (v == prev) continue;
    prev = v;
    if (v >= 2 && fits_u64(v)) {
      const u64 vv = to_u64(v);
      if (primes::is_prime(vv)) out.push_back({vv, n});
    }
  }
  return out;
}

struct ContinuedFraction {
  std::vector<Int> terms;                      // a_0, a_1, ...
  std::vector<std::pair<Int, Int>> convergents;  // (p_k, q_k)
  bool terminated = false;                     // rational input
};

// CF expansion to the requested depth: Euclid for rationals, the PQa
// recurrence for quadratic irrationals.
inline ContinuedFraction continued_fraction(const QuadVal& alpha,
                                            unsigned depth) {
  ContinuedFraction cf;
  auto push_term = [&](const Int& a) {
    cf.terms.push_back(a);
    const std::size_t k = cf.convergents.size();
    if (k == 0) {
      cf.convergents.emplace_back(a, Int(1));
    } else if (k == 1) {
      cf.convergents.emplace_back(a * cf.convergents[0].first + 1,
                                  a * cf.convergents[0].second);
    } else {
      cf.convergents.emplace_back(
          a * cf.convergents[k - 1].first + cf.convergents[k - 2].first,
          a * cf.convergents[k - 1].second + cf.convergents[k - 2].second);
    }
  };

  if (alpha.is_rational()) {
    Int num = alpha.a(), den = alpha.q();
    while (cf.terms.size() < depth && den != 0) {
      Int a;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      push_term(a);
      Int rem = num - a * den;
      num = den;
      den = rem;
    }
    cf.terminated = den == 0;
    return cf;
  }

  // alpha = (P + sgn * sqrt(N)) / Q; fold the sign into P, Q
  Int P = alpha.a(), Q = alpha.q();
  Int N = alpha.b() * alpha.b() * alpha.D();
  if (mpz_sgn(alpha.b().get_mpz_t()) < 0) {
    P = -P;
    Q = -Q;
  }
  // ensure Q | (N - P^2)
  Int check = (N - P * P) % Q;
  if (check != 0) {
    Int absQ = abs(Q);
    P *= absQ;
    N *= absQ * absQ;
    Q *= absQ;
  }
  for (unsigned i = 0; i < depth; ++i) {
    QuadVal cur = QuadVal::surd(P, Int(1), N, Q);
    const Int a = cur.floor();
    push_term(a);
    Int Pn = a * Q - P;
    Int Qn = (N - Pn * Pn) / Q;
    P = Pn;
    Q = Qn;
  }
  return cf;
}

struct TypeEstimate {
  double tau_hat = 1.0;
  unsigned depth = 0;
  // per-convergent exponents log(a_{k+1} q_k)/log q_k on the tail half
  std::vector<double> exponents;
};

// Finite-depth proxy for the irrationality type: the best exponent among
// the deeper convergents (the early ones carry spurious large exponents
// from tiny q_k). Rational input raises RationalAlphaError.
inline TypeEstimate irrationality_type_estimate(const QuadVal& alpha,
                                                unsigned depth) {
  if (depth < 3)
    throw std::invalid_argument("irrationality_type_estimate: depth >= 3");
  auto cf = continued_fraction(alpha, depth + 1);
  if (cf.terminated)
    throw RationalAlphaError("alpha is rational; type is undefined");
  TypeEstimate est;
  est.depth = depth;
  double best = 1.0;
  for (unsigned k = depth / 2; k < depth; ++k) {
    const Int& qk = cf.convergents[k].second;
    const Int& anext = cf.terms[k + 1];
    if (qk < 2) continue;
    const double lq = std::log(qk.get_d());
    const double expo = std::log(anext.get_d() * qk.get_d()) / lq;
    est.exponents.push_back(expo);
    best = std::max(best, expo);
  }
  est.tau_hat = best;
  return est;
}

struct PSParams {
  Rat c = Rat(1);  // exponent, >= 1 (theorem range is (1, 18/17))

  static PSParams make(const Rat& c) {
    if (c < 1) throw std::invalid_argument("ps: need c >= 1");
    return {c};
  }

  bool in_theorem_range() const { return c > 1 && c < Rat(18, 17); }
};

// floor(l^{p/q}) = floor((l^p)^{1/q}), exact via integer k-th roots.
inline Int ps_value(const Int& l, const PSParams& params) {
  const unsigned long p = static_cast<unsigned long>(params.c.get_num().get_ui());
  const unsigned long q = static_cast<unsigned long>(params.c.get_den().get_ui());
  Int lp;
  mpz_pow_ui(lp.get_mpz_t(), l.get_mpz_t(), p);
  Int root;
  mpz_root(root.get_mpz_t(), lp.get_mpz_t(), q);
  return root;
}

inline Int ps_value(u64 l, const PSParams& params) {
  return ps_value(Int(static_cast<unsigned long>(l)), params);
}

inline std::optional<Int> ps_witness(const Int& v, const PSParams& params) {
  const unsigned long p = static_cast<unsigned long>(params.c.get_num().get_ui());
  const unsigned long q = static_cast<unsigned long>(params.c.get_den().get_ui());
  Int vq;
  mpz_pow_ui(vq.get_mpz_t(), v.get_mpz_t(), q);
  Int l0;
  mpz_root(l0.get_mpz_t(), vq.get_mpz_t(), p);
  for (Int l = l0 - 1; l <= l0 + 2; ++l) {
    if (l < 1) continue;
    if (ps_value(l, params) == v) return l;
  }
  return std::nullopt;
}

// Primes of the form floor(l^c) up to limit with their witnessing l.
inline std::vector<SequencePrime> ps_primes(u64 limit, const PSParams& params) {
  if (limit < 2) throw std::invalid_argument("ps_primes: limit >= 2");
  std::vector<SequencePrime> out;
  Int prev(-1);
  for (u64 l = 1;; ++l) {
    Int v = ps_value(l, params);
    if (v > static_cast<unsigned long>(limit)) break;
    if (v == prev) continue;
    prev = v;
    if (v >= 2 && fits_u64(v)) {
      const u64 vv = to_u64(v);
      if (primes::is_prime(vv)) out.push_back({vv, l});
    }
  }
  return out;
}

// Family filter for matrix row scans.
struct SequenceFamily {
  enum class Kind { all, beatty, piatetski_shapiro };
  Kind kind = Kind::all;
  BeattyParams beatty_params;
  PSParams ps_params;

  static SequenceFamily all() { return {}; }
  static SequenceFamily beatty(const BeattyParams& p) {
    SequenceFamily f;
    f.kind = Kind::beatty;
    f.beatty_params = p;
    return f;
  }
  static SequenceFamily piatetski_shapiro(const PSParams& p) {
    SequenceFamily f;
    f.kind = Kind::piatetski_shapiro;
    f.ps_params = p;
    return f;
  }

  bool contains(const Int& v) const {
    switch (kind) {
      case Kind::all:
        return true;
      case Kind::beatty:
        return beatty_witness(v, beatty_params).has_value();
      case Kind::piatetski_shapiro:
        return ps_witness(v, ps_params).has_value();
    }
    return false;
  }
};

// Winner rows whose base prime additionally lies in the family.
inline std::vector<u64> restricted_column_scan(const kpower::MaierMatrix& M,
                                               const std::vector<u64>& winners,
                                               const SequenceFamily& family) {
  std::vector<u64> out;
  for (u64 r : winners)
    if (family.contains(M.base(r))) out.push_back(r);
  return out;
}

}  // namespace gapforge::special
