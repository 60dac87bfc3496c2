#pragma once

// Seeded randomness. Two flavours:
//  - Rng: a sequential stream (std::mt19937_64, whose output sequence is fixed
//    by the standard) with a portable double conversion.
//  - keyed_uniform: a counter-based draw addressed by (seed, stream, keys...).
//    Used wherever two experiment arms or two thread schedules must see the
//    same random number for the same logical event.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace proxtrace {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_keys(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed);
  for (auto k : keys) h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
  return h;
}

/// Uniform in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double keyed_uniform(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  return to_unit_interval(hash_keys(seed, keys));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return to_unit_interval(engine_()); }
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }
  bool bernoulli(double p) { return uniform01() < p; }
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace proxtrace
