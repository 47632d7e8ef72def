#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace teamchess {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive mix of a seed with any number of integer keys.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Seeded stream. Distributions are implemented here rather than via <random>
/// distribution classes, whose output differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace teamchess
