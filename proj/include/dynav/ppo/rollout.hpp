#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dynav/agent/nav_env.hpp"
#include "dynav/agent/policy.hpp"

namespace dynav {

/// One waypoint decision of one environment.
struct Transition {
  PolicyInput input;
  std::vector<std::uint8_t> mask;
  nn::Tensor h_in;  // recurrent state the policy saw
  int action = 0;
  double log_prob = 0.0;
  double value = 0.0;
  double reward = 0.0;
  int sub_steps = 0;
  bool done = false;           // the episode ended with this transition
  bool episode_start = false;  // h_in is the reset state of a fresh episode
};

/// n_envs x n_steps transitions, each environment's steps contiguous.
struct RolloutBatch {
  int n_envs = 0;
  int n_steps = 0;
  std::vector<std::vector<Transition>> steps;
  std::vector<double> bootstrap;        // V of each environment's next state
  std::vector<EpisodeRecord> finished;  // episodes that ended, by (step, env)
  std::int64_t low_level_steps = 0;

  const Transition& at(int env, int t) const { return steps[env][t]; }
};

/// Parallel environments with their recurrent states and policy RNGs.
/// Environment e plays episodes offset + k * n + e for k = 0, 1, ...
class VecEnv {
 public:
  VecEnv(int num_envs, const EnvConfig& cfg, std::shared_ptr<const MapPool> maps,
         std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds, std::uint64_t episode_offset = 0);

  int size() const { return static_cast<int>(envs_.size()); }
  NavEnv& env(int e) { return envs_[e]; }
  const NavEnv& env(int e) const { return envs_[e]; }
  void reset(const PolicyNetwork& policy);
  bool started() const { return started_; }
  std::uint64_t episodes_started() const;

 private:
  friend RolloutBatch collect_rollouts(VecEnv& envs, const PolicyNetwork& policy, int n_steps, SelectMode mode);
  void begin_episode(int e, const PolicyNetwork& policy);

  std::vector<NavEnv> envs_;
  std::vector<nn::Tensor> hidden_;
  std::vector<Rng> rngs_;
  std::vector<std::uint64_t> counters_;
  std::vector<std::uint8_t> fresh_;
  std::uint64_t offset_ = 0;
  bool started_ = false;
};

/// Steps every environment for n_steps decisions. Environments run
/// independently (in parallel when OpenMP has threads) and results merge in
/// environment order, so the batch is identical for any thread count.
RolloutBatch collect_rollouts(VecEnv& envs, const PolicyNetwork& policy, int n_steps,
                              SelectMode mode = SelectMode::Sample);

}  // namespace dynav
