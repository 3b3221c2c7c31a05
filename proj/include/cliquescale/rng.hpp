#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace cliquescale {

/// Seeded random stream with fixed bit-level mappings, so a seed produces
/// the same sequence on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t reject_from = max - (max % n + 1) % n;
    std::uint64_t x = engine_();
    while (x > reject_from) x = engine_();
    return x % n;
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  /// Sample with P(X = i) = (1 - c) * c^i, mean c/(1-c), truncated at cap.
  /// Draws nothing when cap == 0 or c is degenerate.
  std::uint64_t geometric(double continue_prob, std::uint64_t cap) {
    if (cap == 0 || continue_prob <= 0.0) return 0;
    if (continue_prob >= 1.0) return cap;
    const double u = 1.0 - uniform01();  // (0, 1]
    const double x = std::floor(std::log(u) / std::log(continue_prob));
    if (!(x < static_cast<double>(cap))) return cap;
    return static_cast<std::uint64_t>(x);
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream seed from a master seed and a counter (splitmix64
/// finalizer). Used to give every grid realization its own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cliquescale
