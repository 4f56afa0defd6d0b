#pragma once

#include <cstdint>

#include "dynav/common/rng.hpp"

namespace dynav {

/// Stream identifiers mixed into the run seed. Each component draws from
/// its own stream so that changing one consumer never shifts another.
enum class Stream : std::uint64_t {
  MapGen = 1,
  Layout = 2,
  Scenario = 3,
  Motion = 4,
  Augmentation = 5,
  Policy = 6,
  Init = 7,
};

/// Per-component base seeds derived from one run seed.
struct SeedStreams {
  std::uint64_t run = 0;
  std::uint64_t map_gen = 0;
  std::uint64_t layout = 0;
  std::uint64_t scenario = 0;
  std::uint64_t motion = 0;
  std::uint64_t augmentation = 0;
  std::uint64_t policy = 0;
  std::uint64_t init = 0;

  /// Generator for item `counter` (an episode, an environment, a map) of a
  /// stream.
  static Rng rng(std::uint64_t base, std::uint64_t counter) { return Rng(derive_seed(base, 0, counter)); }

  bool operator==(const SeedStreams&) const = default;
};

SeedStreams seed_everything(std::uint64_t run_seed);

}  // namespace dynav
