#pragma once

#include <cmath>
#include <cstdint>

namespace nlasso {

/// SplitMix64 step; used to expand seeds and to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the seed of an independent substream from (seed, stream id).
/// Substreams are how per-node / per-trial draws stay independent of
/// iteration order: stream ids are stable identifiers, never loop counters
/// over unordered containers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (stream << 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b >> 1);
}

/// xoshiro256++ with SplitMix64 seeding. Deterministic and portable:
/// identical seeds give identical streams on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 bits of the stream.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal via the Marsaglia polar method. The method is fixed so
  /// seeded draws are reproducible; it consumes a variable number of
  /// uniforms per pair, which is fine because each substream is private to
  /// one logical consumer.
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * factor;
    have_cached_ = true;
    return u * factor;
  }

  /// Substreams are keyed off the construction seed, not the current state,
  /// so substream(k) is the same stream no matter how many draws happened.
  Rng substream(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

} // namespace nlasso
