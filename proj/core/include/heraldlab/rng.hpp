#pragma once

#include <cmath>
#include <cstdint>

namespace heraldlab::rng {

// splitmix64 step; the standard 64-bit mixing constant set.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent stream seed from (master, stage, counter).
///
/// All randomness in the pipeline flows from one master seed through this
/// function, so stages and frames can be generated in any order (or in
/// parallel) and still reproduce bit-identical output.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stage,
                                 std::uint64_t counter) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (stage * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (counter * 0xa0761d6478bd642fULL + 1);
  return splitmix64(s);
}

/// Small deterministic generator (xoshiro256**) with explicit uniform and
/// Box-Muller normal draws. std::normal_distribution consumes an
/// implementation-defined number of raw draws; this one does not, so streams
/// stay reproducible across standard libraries.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
    have_cached_normal_ = false;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (fixed draw count per pair).
  double normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(phi);
    have_cached_normal_ = true;
    return r * std::cos(phi);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

}  // namespace heraldlab::rng
