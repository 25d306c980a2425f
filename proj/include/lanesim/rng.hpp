#ifndef LANESIM_RNG_HPP
#define LANESIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace lanesim {

/// Named substream RNG. Every stream is an independently seeded mt19937_64
/// derived from (master seed, stream name), so adding a stream never perturbs
/// draws from the others. Distributions are hand-rolled so sequences do not
/// depend on the standard library's unspecified distribution algorithms.
class Rng {
 public:
  Rng(uint64_t master_seed, std::string_view stream)
      : gen_(mix(master_seed ^ fnv1a(stream))) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean) {
    return -mean * std::log1p(-uniform01());
  }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform01() * (hi - lo + 1));
  }

 private:
  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }
  // splitmix64 finalizer; decorrelates adjacent master seeds.
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace lanesim

#endif  // LANESIM_RNG_HPP
