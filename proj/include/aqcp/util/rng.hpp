// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace aqcp::util {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// SplitMix64 step. Used for seed scrambling and counter-based draws.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent substream seed from a master seed and stream ids.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id_a,
                                 std::uint64_t id_b = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= id_a * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  s ^= id_b * 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64(s);
  return h;
}

// Seeded stream with platform-independent output. The engine (mt19937_64)
// is fully specified by the standard; the double conversions below avoid
// std::uniform_real_distribution / std::normal_distribution, whose output
// is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (cosine branch; two draws per call).
  double normal() {
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Samples an index from an unnormalised nonnegative weight vector.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: zero total weight");
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Counter-based N(0,1) draw keyed on (seed, step, key). The same key always
// yields the same draw, so a score evaluated twice for the same candidate
// value within one step receives identical tie-break noise.
inline double keyed_gaussian(std::uint64_t seed, std::uint64_t step,
                             std::uint64_t key) {
  std::uint64_t s = derive_seed(seed, step, key);
  const double u1 = static_cast<double>((splitmix64(s) >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace aqcp::util
