#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace roomforge {

// Seeded RNG with hand-rolled distributions. std::mt19937_64 output is
// specified bit-exactly by the standard; the distribution adapters in
// <random> are not, so we build uniform/normal draws from the raw stream
// to keep outputs reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Uniform integer in [lo, hi] inclusive. Rejection-free for our small
  // ranges; modulo bias is below 2^-50 for ranges under 2^14.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

  // Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::int64_t>(last - first);
    for (std::int64_t i = n - 1; i > 0; --i) {
      const std::int64_t j = uniform_int(0, i);
      std::swap(first[i], first[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Derives an independent stream seed from a base seed and a stream label.
// SplitMix64 finalizer, so nearby labels give uncorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace roomforge
