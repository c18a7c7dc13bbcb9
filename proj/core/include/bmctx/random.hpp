#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace bmctx {

// Draw helpers on top of std::mt19937_64. The engine is fully specified by the
// standard; the <random> distributions are not, so the transforms live here to
// keep seeded runs reproducible across toolchains.

// Uniform double in [0, 1).
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Marsaglia polar method; rejection count is deterministic given the stream.
inline double gaussian(std::mt19937_64& rng, double mean, double sd) {
  double u, v, s;
  do {
    u = 2.0 * uniform_unit(rng) - 1.0;
    v = 2.0 * uniform_unit(rng) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
}

// Unbiased integer in [0, n); n must be positive.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  assert(n > 0);
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Fisher-Yates with the local integer draw, so shuffles are seed-stable.
template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

// Splitmix-style seed for substructure #ordinal of a parent seed, so layers
// created in different orders across model variants still match when their
// creation ordinals match.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t ordinal) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (ordinal + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bmctx
