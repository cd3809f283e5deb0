#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gapforge/parallel.hpp"
#include "gapforge/rng.hpp"

namespace gapforge::hyper {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Random-subset model with exact marginals: an edge carries a candidate
// list and includes each candidate independently, so #e_i never exceeds the
// candidate count and P(v in e_i) is the stored probability.
struct Edge {
  std::vector<std::pair<u32, double>> candidates;  // (vertex, inclusion prob)
};

struct LayeredEdgeModel {
  u32 vertex_count = 0;
  std::vector<std::vector<Edge>> layers;

  u32 max_edge_size() const {
    u32 r = 0;
    for (const auto& layer : layers)
      for (const auto& e : layer)
        r = std::max<u32>(r, static_cast<u32>(e.candidates.size()));
    return r;
  }

  // d[j][v] = sum of inclusion probabilities over layer j's edges
  std::vector<std::vector<double>> normalized_degrees() const {
    std::vector<std::vector<double>> d(layers.size(),
                                       std::vector<double>(vertex_count, 0.0));
    for (std::size_t j = 0; j < layers.size(); ++j)
      for (const auto& e : layers[j])
        for (const auto& [v, q] : e.candidates) d[j][v] += q;
    return d;
  }
};

// P_0 = 1, P_{j+1}(v) = P_j(v) exp(-d_{j+1}(v)/P_j(v)). Returns the full
// (m+1) x V table; min_p reports the kappa floor.
inline std::vector<std::vector<double>> pj_recursion(
    const std::vector<std::vector<double>>& degrees, double* min_p = nullptr) {
  const std::size_t m = degrees.size();
  const std::size_t V = m == 0 ? 0 : degrees[0].size();
  std::vector<std::vector<double>> P(m + 1, std::vector<double>(V, 1.0));
  double lo = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (degrees[j].size() != V)
      throw std::invalid_argument("ragged degree matrix");
    for (std::size_t v = 0; v < V; ++v) {
      const double d = degrees[j][v];
      if (d < 0) throw std::invalid_argument("negative degree");
      P[j + 1][v] = P[j][v] * std::exp(-d / P[j][v]);
      lo = std::min(lo, P[j + 1][v]);
    }
  }
  if (min_p) *min_p = lo;
  return P;
}

struct HypothesisReport {
  bool smallness = false;    // delta <= (kappa^A / (C0 e^{AD}))^{10^{m+2}}
  bool sparsity = false;     // P(v in e_i) <= delta / sqrt(|I_j|)
  bool codegree = false;     // sum_i P(v1,v2 in e_i) <= delta
  bool degree_bound = false; // d_{I_j}(v) <= D P_{j-1}(v)
  bool kappa_floor = false;  // P_j(v) >= kappa

  double smallness_rhs = 0.0;
  double max_inclusion = 0.0;       // worst P(v in e_i) * sqrt(|I_j|)
  double max_codegree = 0.0;
  double degree_margin = 0.0;       // max d/(D P_{j-1})
  double min_pj = 1.0;

  bool all_pass() const {
    return smallness && sparsity && codegree && degree_bound && kappa_floor;
  }
};

// Evaluates every hypothesis of the covering theorem with exact model
// probabilities and reports measured margins.
inline HypothesisReport check_hypotheses(const LayeredEdgeModel& model,
                                         double delta, double kappa, double D,
                                         double A, double C0 = 1.0) {
  if (!(kappa > 0.0 && kappa <= 0.5))
    throw std::invalid_argument("kappa must lie in (0, 1/2]");
  HypothesisReport rep;
  const double m = static_cast<double>(model.layers.size());
  rep.smallness_rhs =
      std::pow(std::pow(kappa, A) / (C0 * std::exp(A * D)),
               std::pow(10.0, m + 2.0));
  rep.smallness = delta <= rep.smallness_rhs;

  rep.sparsity = true;
  for (const auto& layer : model.layers) {
    const double root = std::sqrt(static_cast<double>(layer.size()));
    for (const auto& e : layer)
      for (const auto& [v, q] : e.candidates) {
        rep.max_inclusion = std::max(rep.max_inclusion, q * root);
        if (q > delta / root) rep.sparsity = false;
      }
  }

  rep.codegree = true;
  for (const auto& layer : model.layers) {
    std::map<std::pair<u32, u32>, double> pair_sums;
    for (const auto& e : layer)
      for (std::size_t a = 0; a < e.candidates.size(); ++a)
        for (std::size_t b = a + 1; b < e.candidates.size(); ++b) {
          auto key = std::minmax(e.candidates[a].first, e.candidates[b].first);
          pair_sums[{key.first, key.second}] +=
              e.candidates[a].second * e.candidates[b].second;
        }
    for (const auto& [vs, total] : pair_sums) {
      rep.max_codegree = std::max(rep.max_codegree, total);
      if (total > delta) rep.codegree = false;
    }
  }

  const auto degrees = model.normalized_degrees();
  const auto P = pj_recursion(degrees, &rep.min_pj);
  rep.degree_bound = true;
  for (std::size_t j = 0; j < degrees.size(); ++j)
    for (std::size_t v = 0; v < degrees[j].size(); ++v) {
      const double cap = D * P[j][v];
      if (cap > 0)
        rep.degree_margin = std::max(rep.degree_margin, degrees[j][v] / cap);
      if (degrees[j][v] > cap) rep.degree_bound = false;
    }
  rep.kappa_floor = rep.min_pj >= kappa;
  return rep;
}

struct NibbleReport {
  std::vector<double> observed;   // mean survival fraction after layer j
  std::vector<double> predicted;  // mean P_j(v) over vertices
  std::vector<double> std_error;  // Monte-Carlo standard error per layer
  double reference_density = 0.0;   // 5^{-m} reference density
  u64 trials = 0;
};

// Random-greedy pass with exponential thinning: every sampled edge removes
// its vertices, then survivors are thinned so the per-layer survival factor
// matches exp(-d_j(v)/P_{j-1}(v)) in expectation (clamped when the plain
// pass already removes more). Acceptance is statistical.
inline NibbleReport nibble_simulate(const LayeredEdgeModel& model, u32 m,
                                    u64 trials, u64 seed, unsigned jobs = 1) {
  if (m > model.layers.size())
    throw std::invalid_argument("m exceeds the model's layer count");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const u32 V = model.vertex_count;
  const auto degrees = model.normalized_degrees();
  const auto P = pj_recursion(degrees);

  // plain per-layer survival prod(1 - q) and the thinning top-up
  std::vector<std::vector<double>> plain(m, std::vector<double>(V, 1.0));
  for (u32 j = 0; j < m; ++j)
    for (const auto& e : model.layers[j])
      for (const auto& [v, q] : e.candidates) plain[j][v] *= 1.0 - q;
  std::vector<std::vector<double>> topup(m, std::vector<double>(V, 0.0));
  for (u32 j = 0; j < m; ++j)
    for (u32 v = 0; v < V; ++v) {
      const double target = std::exp(-degrees[j][v] / P[j][v]);
      if (plain[j][v] > 0)
        topup[j][v] = std::max(0.0, 1.0 - target / plain[j][v]);
    }

  std::vector<std::vector<double>> frac(trials, std::vector<double>(m, 0.0));
  par::parallel_for(trials, jobs, [&](std::size_t t) {
    auto g = rng::substream(seed, t);
    std::vector<char> alive(V, 1);
    for (u32 j = 0; j < m; ++j) {
      for (const auto& e : model.layers[j]) {
        // sample the edge, then cover its vertices
        for (const auto& [v, q] : e.candidates)
          if (g.unit() < q) alive[v] = 0;
      }
      u32 count = 0;
      for (u32 v = 0; v < V; ++v) {
        if (alive[v] && topup[j][v] > 0 && g.unit() < topup[j][v]) alive[v] = 0;
        count += alive[v];
      }
      frac[t][j] = V == 0 ? 0.0 : static_cast<double>(count) / V;
    }
  });

  NibbleReport rep;
  rep.trials = trials;
  rep.reference_density = std::pow(5.0, -static_cast<double>(m));
  rep.observed.resize(m);
  rep.predicted.resize(m);
  rep.std_error.resize(m);
  for (u32 j = 0; j < m; ++j) {
    double sum = 0, sum2 = 0;
    for (u64 t = 0; t < trials; ++t) {
      sum += frac[t][j];
      sum2 += frac[t][j] * frac[t][j];
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, sum2 / trials - mean * mean);
    rep.observed[j] = mean;
    rep.std_error[j] = std::sqrt(var / static_cast<double>(trials));
    double pmean = 0;
    for (u32 v = 0; v < V; ++v) pmean += P[j + 1][v];
    rep.predicted[j] = V == 0 ? 0.0 : pmean / V;
  }
  return rep;
}

struct ColoredGraph {
  u32 vertices = 0;
  u32 colors = 0;  // N
  struct E {
    u32 a = 0, b = 0;
    u32 color = 0;  // in [1, colors]
  };
  std::vector<E> edges;
};

// Block-greedy matching: colors split into K consecutive blocks, edges
// scanned in (color, endpoints) order, accepted when vertex- and
// color-disjoint from everything chosen so far. Returns edge indices.
inline std::vector<std::size_t> greedy_color_matching(const ColoredGraph& g,
                                                      u32 K_blocks) {
  if (K_blocks < 1 || g.colors % K_blocks != 0)
    throw std::invalid_argument("blocks must divide the color count");
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& x = g.edges[i];
    const auto& y = g.edges[j];
    return std::tie(x.color, x.a, x.b) < std::tie(y.color, y.a, y.b);
  });
  std::vector<char> vertex_used(g.vertices, 0);
  std::vector<char> color_used(g.colors + 1, 0);
  std::vector<std::size_t> chosen;
  const u32 block_len = g.colors / K_blocks;
  for (u32 block = 0; block < K_blocks; ++block) {
    const u32 lo = block * block_len + 1, hi = (block + 1) * block_len;
    for (std::size_t idx : order) {
      const auto& e = g.edges[idx];
      if (e.color < lo || e.color > hi) continue;
      if (e.a == e.b) continue;
      if (vertex_used[e.a] || vertex_used[e.b] || color_used[e.color]) continue;
      vertex_used[e.a] = vertex_used[e.b] = 1;
      color_used[e.color] = 1;
      chosen.push_back(idx);
    }
  }
  return chosen;
}

// Lower bound from the colored-matching theorem:
// (c N / 4)(1 - exp(-4/c + 8/(c^2 K))).
inline double matching_bound(double c, double K, double N) {
  return c * N / 4.0 * (1.0 - std::exp(-4.0 / c + 8.0 / (c * c * K)));
}

// Exact K-uniform N-colored circulant construction on cN vertices:
// each block takes D distinct ring differences; the edges of one difference
// get the block's colors cyclically. Every color lands on exactly S = cKD
// edges and every vertex sees exactly T/K = 2D edges per block.
inline ColoredGraph make_uniform_colored_graph(u32 N, u32 K, u32 c, u32 D,
                                               u64 seed) {
  if (K == 0 || N % K != 0)
    throw std::invalid_argument("need K | N");
  if (c < 1) throw std::invalid_argument("need c >= 1");
  const u32 M = c * N;  // vertices
  const u32 half = (M - 1) / 2;
  if (static_cast<u64>(K) * D > half)
    throw std::invalid_argument("not enough distinct differences");
  std::vector<u32> diffs(half);
  std::iota(diffs.begin(), diffs.end(), 1);
  auto g = rng::substream(seed, 0);
  for (u32 i = half; i > 1; --i)
    std::swap(diffs[i - 1], diffs[g.below(i)]);

  ColoredGraph out;
  out.vertices = M;
  out.colors = N;
  const u32 block_len = N / K;
  std::size_t next_diff = 0;
  for (u32 block = 0; block < K; ++block) {
    for (u32 d_idx = 0; d_idx < D; ++d_idx) {
      const u32 d = diffs[next_diff++];
      for (u32 v = 0; v < M; ++v) {
        ColoredGraph::E e;
        e.a = v;
        e.b = (v + d) % M;
        e.color = block * block_len + (v % block_len) + 1;
        out.edges.push_back(e);
      }
    }
  }
  return out;
}

struct SiftReport {
  double sigma = 1.0;             // prod (1 - 1/s)
  double mean_survivors = 0.0;    // among the target set
  double var_survivors = 0.0;
  double expected = 0.0;          // sigma * |Q|
  double std_error = 0.0;         // of the mean
  // joint survival frequencies for the probe tuples vs sigma^t
  std::vector<double> joint_empirical;
  std::vector<double> joint_expected;
  u64 trials = 0;
};

// Draws a_s uniformly mod s for each prime in S, counts survivors of the
// sifted set among Q = (0, q_hi], and tracks joint survival of probe
// tuples whose members must be pairwise distinct mod every s.
inline SiftReport random_sift_sim(const std::vector<u64>& S, u64 q_hi,
                                  const std::vector<std::vector<u64>>& probes,
                                  u64 trials, u64 seed) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  SiftReport rep;
  rep.trials = trials;
  for (u64 s : S) rep.sigma *= 1.0 - 1.0 / static_cast<double>(s);
  rep.expected = rep.sigma * static_cast<double>(q_hi);
  for (const auto& probe : probes)
    rep.joint_expected.push_back(
        std::pow(rep.sigma, static_cast<double>(probe.size())));
  rep.joint_empirical.assign(probes.size(), 0.0);

  double sum = 0, sum2 = 0;
  for (u64 t = 0; t < trials; ++t) {
    auto g = rng::substream(seed, t);
    std::vector<u64> a(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) a[i] = g.below(S[i]);
    u64 survivors = 0;
    for (u64 n = 1; n <= q_hi; ++n) {
      bool ok = true;
      for (std::size_t i = 0; i < S.size() && ok; ++i)
        if (n % S[i] == a[i]) ok = false;
      survivors += ok;
    }
    sum += static_cast<double>(survivors);
    sum2 += static_cast<double>(survivors) * static_cast<double>(survivors);
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      bool all = true;
      for (u64 n : probes[pi])
        for (std::size_t i = 0; i < S.size() && all; ++i)
          if (n % S[i] == a[i]) all = false;
      if (all) rep.joint_empirical[pi] += 1.0;
    }
  }
  rep.mean_survivors = sum / trials;
  rep.var_survivors =
      std::max(0.0, sum2 / trials - rep.mean_survivors * rep.mean_survivors);
  rep.std_error = std::sqrt(rep.var_survivors / static_cast<double>(trials));
  for (double& f : rep.joint_empirical) f /= static_cast<double>(trials);
  return rep;
}

}  // namespace gapforge::hyper
