#pragma once

#include <cstdint>
#include <vector>

namespace surrocae {

/// Counter-based 64-bit generator: output i is a hash of (key, i), so streams
/// can be split by re-keying without sharing state. All stochastic pieces of
/// the library draw from substreams of one root seed, which keeps artifacts
/// reproducible for a fixed (config, seed) pair.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc908ull)) {}

  /// Independent stream derived from this one; does not advance the parent.
  Rng substream(std::uint64_t id) const {
    return Rng(mix(key_ + mix(id + 0xbb67ae8584caa73bull)), 0);
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Unbiased integer in [0,n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  Rng(std::uint64_t key, int) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace surrocae
