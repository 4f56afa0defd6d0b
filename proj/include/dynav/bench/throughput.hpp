#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dynav/agent/nav_env.hpp"
#include "dynav/agent/policy.hpp"

namespace dynav {

struct ThroughputRow {
  std::string mode;  // "env" or "env+policy"
  int num_envs = 0;
  double seconds = 0.0;
  std::int64_t low_level_steps = 0;
  double steps_per_second = 0.0;
  double per_env_steps_per_second = 0.0;
};

struct ThroughputOptions {
  int num_envs = 1;
  double duration = 1.0;  // seconds per mode
  double warmup = 0.2;
};

/// Steps `num_envs` environments for `duration` seconds after a warmup,
/// first with uniformly random unmasked waypoints and then with `policy`
/// choosing them. Throws std::invalid_argument for a non-positive
/// duration or a negative warmup.
std::vector<ThroughputRow> throughput_bench(const EnvConfig& env, std::shared_ptr<const MapPool> maps,
                                            std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                            const PolicyNetwork& policy, const ThroughputOptions& opts);

std::string throughput_csv(const std::vector<ThroughputRow>& rows);

}  // namespace dynav
