#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace decor {

/// Seeded random stream. Wraps mt19937_64 with portable bounded draws so
/// results do not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform integer in [lo, hi], inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (next() >> 63) != 0; }

  /// Bernoulli(p).
  bool chance(double p) { return unit() < p; }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Child stream for a named stage; stable across runs and platforms.
  Rng fork(std::string_view stage, std::uint64_t index = 0) { return Rng(derive_seed(next(), stage, index)); }

  static std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Seed for stage `stage`, item `index`, under master seed `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t index = 0) {
  return Rng::derive_seed(master, stage, index);
}

}  // namespace decor
