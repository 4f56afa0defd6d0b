#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace dynav {

// SplitMix64 finalizer. Used to derive independent stream seeds from
// (run seed, stream id, counter) triples.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t counter = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) ^ counter);
}

/// Seeded generator with distribution helpers that do not depend on the
/// standard library's implementation-defined distributions, so draws are
/// identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);

  bool bernoulli(double p) { return uniform() < p; }

  double normal();

  /// Uniformly chosen element of a non-empty span.
  template <typename T>
  const T& choice(std::span<const T> items) {
    return items[uniform_index(items.size())];
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dynav
