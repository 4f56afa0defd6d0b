#include "dynav/common/seeding.hpp"

namespace dynav {

SeedStreams seed_everything(std::uint64_t run_seed) {
  const auto s = [run_seed](Stream id) { return derive_seed(run_seed, static_cast<std::uint64_t>(id)); };
  return {run_seed,        s(Stream::MapGen), s(Stream::Layout), s(Stream::Scenario), s(Stream::Motion),
          s(Stream::Augmentation), s(Stream::Policy), s(Stream::Init)};
}

}  // namespace dynav
