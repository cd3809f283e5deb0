#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "gapforge/factor.hpp"
#include "gapforge/primes.hpp"
#include "gapforge/rng.hpp"

namespace gapforge::maynard {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct LinearForm {
  i64 a = 1;  // slope, nonzero
  i64 b = 0;  // intercept
  i64 operator()(i64 n) const { return a * n + b; }
};

struct LinearFormSet {
  std::vector<LinearForm> forms;

  unsigned k() const { return static_cast<unsigned>(forms.size()); }

  static LinearFormSet from_offsets(const std::vector<u64>& offsets) {
    LinearFormSet L;
    for (u64 h : offsets) L.forms.push_back({1, static_cast<i64>(h)});
    return L;
  }
};

// W = product of primes p <= 2k^2 with p not dividing B.
inline u64 w_factor(unsigned k, u64 B) {
  if (B < 1) throw std::invalid_argument("w_factor: need B >= 1");
  u64 W = 1;
  for (u64 p : primes::sieve_segment(0, 2ull * k * k + 1))
    if (B % p != 0) W *= p;
  return W;
}

struct OmegaInfo {
  std::vector<u64> roots;            // n in [0, p) with p | prod L_i(n), ascending
  std::vector<unsigned> least_form;  // 1-based least i with p | L_i(root)
  unsigned omega() const { return static_cast<unsigned>(roots.size()); }
};

inline OmegaInfo omega_count(u64 p, const LinearFormSet& L) {
  OmegaInfo info;
  for (u64 n = 0; n < p; ++n) {
    unsigned least = 0;
    for (unsigned i = 0; i < L.k(); ++i) {
      const i64 v = L.forms[i](static_cast<i64>(n));
      const i64 m = v % static_cast<i64>(p);
      if (m == 0) {
        least = i + 1;
        break;
      }
    }
    if (least != 0) {
      info.roots.push_back(n);
      info.least_form.push_back(least);
    }
  }
  return info;
}

// Truncated singular series prod_{p<=cutoff, p coprime to exclude}
// (1 - omega(p)/p)(1 - 1/p)^-k. Returns exactly 0 when a factor vanishes.
inline double singular_series_excluding(const LinearFormSet& L, u64 exclude,
                                        u64 cutoff) {
  const double k = static_cast<double>(L.k());
  double acc = 1.0;
  for (u64 p : primes::sieve_segment(0, cutoff + 1)) {
    if (exclude % p == 0) continue;
    const unsigned omega = omega_count(p, L).omega();
    if (omega >= p) return 0.0;
    const double pd = static_cast<double>(p);
    acc *= (1.0 - omega / pd) * std::pow(1.0 - 1.0 / pd, -k);
  }
  return acc;
}

inline double singular_series(const LinearFormSet& L, u64 B, u64 cutoff) {
  if (cutoff < 2) throw std::invalid_argument("singular_series: cutoff >= 2");
  return singular_series_excluding(L, B, cutoff);
}

// No fixed prime divisor. Only p <= max(k, |a_i|) can occupy every class.
inline bool is_admissible(const LinearFormSet& L) {
  u64 bound = L.k();
  for (const auto& f : L.forms)
    bound = std::max<u64>(bound, static_cast<u64>(std::llabs(f.a)));
  for (u64 p : primes::sieve_segment(0, bound + 1))
    if (omega_count(p, L).omega() >= p) return false;
  return true;
}

// Evaluator supported on the simplex {t_i >= 0, sum t_i <= 1}.
struct SimplexFunction {
  std::function<double(std::span<const double>)> eval;
  double degree = 0.0;  // bookkeeping for the default power family

  double operator()(std::span<const double> t) const { return eval(t); }

  static bool inside(std::span<const double> t) {
    double s = 0.0;
    for (double v : t) {
      if (v < 0.0) return false;
      s += v;
    }
    return s <= 1.0;
  }

  // F(t) = (1 - sum t_i)^a on the simplex, 0 outside.
  static SimplexFunction power(double a) {
    SimplexFunction f;
    f.degree = a;
    f.eval = [a](std::span<const double> t) {
      double s = 0.0;
      for (double v : t) {
        if (v < 0.0) return 0.0;
        s += v;
      }
      if (s > 1.0) return 0.0;
      return a == 0.0 ? 1.0 : std::pow(1.0 - s, a);
    };
    return f;
  }

  static SimplexFunction one() { return power(0.0); }

  static SimplexFunction zero() {
    SimplexFunction f;
    f.eval = [](std::span<const double>) { return 0.0; };
    return f;
  }
};

// Divisor-tuple weight state: the lambda table over D_k with prod d <= R,
// plus the constants entering Y.
struct MaynardWeightState {
  unsigned k = 1;
  u64 W = 1;
  u64 B = 1;
  double R = 2.0;
  SimplexFunction F;
  double series_wb = 1.0;             // truncated singular series over p coprime to WB
  double series_tail_log_estimate = 0.0;
  double y_scale = 1.0;               // (W B / phi(W B))^k * series_wb

  struct AllowedPrime {
    u64 p;
    unsigned omega;
    std::vector<unsigned> coords;  // 1-based coordinates that p may divide
  };
  std::vector<AllowedPrime> allowed;  // primes coprime to WB, ascending, <= R

  std::map<std::vector<u64>, double> lambda;  // d-tuple -> lambda value
};

namespace detail {

inline u64 phi_of_wb(u64 W, u64 B) {
  // W squarefree by construction, B = 1 or prime
  u64 phi = factor::euler_phi(W);
  if (B == 1) return phi;
  return (W % B == 0) ? phi * B : phi * (B - 1);
}

// Sum over D_k multiples r of d (coordinatewise, prod r <= R) of
// Y(r)/phi_omega(prod r). Products are tracked as exact integers; the
// denominator carries (p - omega(p)) for every prime of prod r, including
// the primes of d itself.
struct MultipleSum {
  const MaynardWeightState* st;
  u64 r_cap;          // floor(R)
  double total = 0.0;
  std::vector<u64> r;  // current multiple tuple
  u64 prod = 1;

  void run(std::size_t idx, double denom, const std::vector<char>& used_prime) {
    {
      const double log_R = std::log(st->R);
      std::vector<double> args(st->k);
      for (unsigned i = 0; i < st->k; ++i)
        args[i] = std::log(static_cast<double>(r[i])) / log_R;
      const double f = st->F(std::span<const double>(args.data(), args.size()));
      total += st->y_scale * f / denom;
    }
    for (std::size_t j = idx; j < st->allowed.size(); ++j) {
      if (used_prime[j]) continue;
      const auto& ap = st->allowed[j];
      if (prod > r_cap / ap.p) continue;
      prod *= ap.p;
      for (unsigned coord : ap.coords) {
        r[coord - 1] *= ap.p;
        run(j + 1, denom * (static_cast<double>(ap.p) - ap.omega), used_prime);
        r[coord - 1] /= ap.p;
      }
      prod /= ap.p;
    }
  }
};

}  // namespace detail

// Builds W, the truncated singular series and the full lambda table for the
// divisor tuples in D_k with prod d <= R.
inline MaynardWeightState build_maynard_state(
    const LinearFormSet& L, double R, u64 B = 1,
    SimplexFunction F = SimplexFunction{}, u64 series_cutoff = 10000) {
  if (L.k() == 0) throw std::invalid_argument("empty linear form set");
  if (!(R > 1.0)) throw std::invalid_argument("need R > 1");
  if (!is_admissible(L))
    throw std::invalid_argument("linear form set has a fixed prime divisor");
  MaynardWeightState st;
  st.k = L.k();
  st.B = B;
  st.W = w_factor(st.k, B);
  st.R = R;
  st.F = F.eval ? F : SimplexFunction::power(static_cast<double>(st.k));

  const u64 WB_mod = st.W * B;  // for coprimality tests only
  st.series_wb = singular_series_excluding(L, WB_mod, series_cutoff);
  // beyond the cutoff each factor is 1 + O(k^2/p^2)
  st.series_tail_log_estimate =
      static_cast<double>(st.k) * st.k /
      (static_cast<double>(series_cutoff) * std::log(static_cast<double>(series_cutoff)));
  const double ratio = static_cast<double>(WB_mod) /
                       static_cast<double>(detail::phi_of_wb(st.W, B));
  st.y_scale = std::pow(ratio, static_cast<double>(st.k)) * st.series_wb;

  for (u64 p : primes::sieve_segment(0, static_cast<u64>(R) + 1)) {
    if (WB_mod % p == 0) continue;
    auto info = omega_count(p, L);
    if (info.omega() == 0) continue;  // p never divides the product
    MaynardWeightState::AllowedPrime ap;
    ap.p = p;
    ap.omega = info.omega();
    std::vector<unsigned> coords(info.least_form);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    ap.coords = std::move(coords);
    st.allowed.push_back(std::move(ap));
  }

  // enumerate D_k tuples d with prod <= R, then the multiple sum per tuple
  const u64 r_cap = static_cast<u64>(std::floor(R));
  std::vector<u64> d(st.k, 1);
  std::vector<char> used(st.allowed.size(), 0);
  auto emit = [&](int sign, u64 prod) {
    double denom_d = 1.0;
    for (std::size_t j = 0; j < st.allowed.size(); ++j)
      if (used[j])
        denom_d *= static_cast<double>(st.allowed[j].p) - st.allowed[j].omega;
    detail::MultipleSum ms;
    ms.st = &st;
    ms.r_cap = r_cap;
    ms.r = d;
    ms.prod = prod;
    ms.run(0, denom_d, used);
    st.lambda[d] = sign * static_cast<double>(prod) * ms.total;
  };
  auto rec = [&](auto&& self, std::size_t idx, int sign, u64 prod) -> void {
    emit(sign, prod);
    for (std::size_t j = idx; j < st.allowed.size(); ++j) {
      const auto& ap = st.allowed[j];
      if (prod > r_cap / ap.p) continue;
      used[j] = 1;
      for (unsigned coord : ap.coords) {
        d[coord - 1] *= ap.p;
        self(self, j + 1, -sign, prod * ap.p);
        d[coord - 1] /= ap.p;
      }
      used[j] = 0;
    }
  };
  rec(rec, 0, 1, 1);
  return st;
}

// lambda for one divisor tuple; zero outside the table's domain.
inline double maynard_lambda(const std::vector<u64>& d,
                             const MaynardWeightState& st) {
  auto it = st.lambda.find(d);
  return it == st.lambda.end() ? 0.0 : it->second;
}

// w(n) per the squared divisor-tuple sum.
inline double maynard_weight(i64 n, const MaynardWeightState& st,
                             const LinearFormSet& L) {
  if (L.k() != st.k) throw std::invalid_argument("k mismatch");
  std::vector<i64> values(st.k);
  for (unsigned i = 0; i < st.k; ++i) values[i] = L.forms[i](n);
  double sum = 0.0;
  for (const auto& [d, lam] : st.lambda) {
    bool divides = true;
    for (unsigned i = 0; i < st.k && divides; ++i) {
      if (d[i] == 1) continue;
      const u64 v = static_cast<u64>(std::llabs(values[i]));
      if (v % d[i] != 0) divides = false;  // v == 0 is divisible by anything
    }
    if (divides) sum += lam;
  }
  return sum * sum;
}

struct IkJkResult {
  double I = 0.0;
  double J = 0.0;
  double se_I = 0.0;
  double se_J = 0.0;
};

namespace detail {

struct GaussLegendre {
  std::vector<double> nodes, weights;  // on [-1, 1]

  explicit GaussLegendre(unsigned n) {
    nodes.resize(n);
    weights.resize(n);
    for (unsigned i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (unsigned j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
  }
};

inline const GaussLegendre& gl32() {
  static const GaussLegendre g(32);
  return g;
}

// uniform point on the simplex {t >= 0, sum <= 1} via exponential spacings
inline void sample_simplex(rng::SplitMix64& g, std::span<double> t) {
  double total = 0.0;
  for (double& v : t) {
    v = -std::log(1.0 - g.unit());
    total += v;
  }
  total += -std::log(1.0 - g.unit());  // slack coordinate
  for (double& v : t) v /= total;
}

}  // namespace detail

// Monte-Carlo I_k = int_{R_k} F^2 and J_k = int_{R_{k-1}} (int F dt_k)^2,
// sampled uniformly on the simplex with a fixed seed; the inner integral
// uses 32-node Gauss-Legendre. Standard errors accompany both estimates.
inline IkJkResult ik_jk(const SimplexFunction& F, unsigned k,
                        u64 samples = 1000000, u64 seed = 42) {
  if (k < 1) throw std::invalid_argument("ik_jk: need k >= 1");
  IkJkResult out;
  const auto& gl = detail::gl32();

  double vol_k = 1.0;
  for (unsigned i = 2; i <= k; ++i) vol_k /= i;

  {
    auto g = rng::substream(seed, 1);
    std::vector<double> t(k);
    double sum = 0.0, sum2 = 0.0;
    for (u64 s = 0; s < samples; ++s) {
      detail::sample_simplex(g, t);
      const double v = F(t);
      sum += v * v;
      sum2 += v * v * v * v;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum2 / samples - mean * mean);
    out.I = vol_k * mean;
    out.se_I = vol_k * std::sqrt(var / samples);
  }

  auto inner_integral = [&](std::vector<double>& t, double slack) {
    // integrate F over the last coordinate from 0 to slack
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      t[k - 1] = slack * 0.5 * (gl.nodes[i] + 1.0);
      acc += gl.weights[i] * F(t);
    }
    return acc * slack * 0.5;
  };

  if (k == 1) {
    std::vector<double> t(1);
    const double g1 = inner_integral(t, 1.0);
    out.J = g1 * g1;
    out.se_J = 0.0;
    return out;
  }

  double vol_k1 = 1.0;
  for (unsigned i = 2; i <= k - 1; ++i) vol_k1 /= i;
  auto g = rng::substream(seed, 2);
  std::vector<double> outer(k - 1), t(k);
  double sum = 0.0, sum2 = 0.0;
  for (u64 s = 0; s < samples; ++s) {
    detail::sample_simplex(g, std::span<double>(outer.data(), k - 1));
    double slack = 1.0;
    for (unsigned i = 0; i < k - 1; ++i) {
      t[i] = outer[i];
      slack -= outer[i];
    }
    const double gi = inner_integral(t, std::max(0.0, slack));
    sum += gi * gi;
    sum2 += gi * gi * gi * gi;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sum2 / samples - mean * mean);
  out.J = vol_k1 * mean;
  out.se_J = vol_k1 * std::sqrt(var / samples);
  return out;
}

}  // namespace gapforge::maynard
