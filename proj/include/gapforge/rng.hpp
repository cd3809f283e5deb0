#pragma once

#include <cstdint>

namespace gapforge::rng {

// splitmix64. Fully specified generator so seeded runs reproduce byte-for-byte
// across platforms and across --jobs settings: substreams are keyed by an
// explicit stream index, never by thread identity.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, bound) by rejection. bound must be >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0xa0761d6478bd642fULL * (stream + 1)));
  g.next();
  return g;
}

}  // namespace gapforge::rng
