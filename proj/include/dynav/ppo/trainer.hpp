#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "dynav/ppo/update.hpp"

namespace dynav {

/// One line of the training stats stream.
struct UpdateReport {
  int update = 0;
  double mean_return = 0.0;   // over the recent episode window
  double success_rate = 0.0;
  double spl_or_dspl = 0.0;   // DSPL on moving-source episodes, SPL otherwise
  LossTerms loss;
  double lr = 0.0;
  double clip = 0.0;
  std::int64_t low_level_steps = 0;  // cumulative
  std::int64_t episodes = 0;         // cumulative
};

std::string stats_csv_header();
std::string stats_csv_row(const UpdateReport& r);

/// PPO training loop over a set of parallel environments.
class Trainer {
 public:
  Trainer(PpoConfig cfg, const EnvConfig& env, std::shared_ptr<const MapPool> maps,
          std::shared_ptr<const SoundBank> bank, NetworkProfile profile, const SeedStreams& seeds,
          int total_updates, int stats_window = 50);

  /// Collects one rollout and runs one PPO update.
  UpdateReport train_update();

  int updates() const { return updates_; }
  int total_updates() const { return total_updates_; }
  std::int64_t low_level_steps() const { return low_level_steps_; }
  PolicyNetwork& policy() { return policy_; }
  const PolicyNetwork& policy() const { return policy_; }
  const nn::Adam& optimizer() const { return adam_; }
  const RolloutBatch& last_batch() const { return last_batch_; }

 private:
  struct EpisodeSummary {
    double ret = 0.0;
    double success = 0.0;
    double weighted = 0.0;
  };

  PpoConfig cfg_;
  PolicyNetwork policy_;
  nn::Adam adam_;
  VecEnv envs_;
  int total_updates_;
  int updates_ = 0;
  std::int64_t low_level_steps_ = 0;
  std::int64_t episodes_ = 0;
  std::size_t window_size_;
  std::deque<EpisodeSummary> window_;
  RolloutBatch last_batch_;
};

struct EvalOptions {
  int episodes = 100;
  int num_envs = 1;
  SelectMode mode = SelectMode::Sample;
  std::uint64_t episode_offset = 0;
};

/// Plays episodes offset .. offset + episodes - 1 with the policy and
/// returns their records ordered by episode id.
std::vector<EpisodeRecord> evaluate_policy(const PolicyNetwork& policy, const EnvConfig& env,
                                           std::shared_ptr<const MapPool> maps,
                                           std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                           const EvalOptions& opts);

/// Same episodes driven by the fully informed chaser: each low-level step
/// it follows a minimal action plan to the source's current cell and stops
/// on arrival.
std::vector<EpisodeRecord> evaluate_oracle(const EnvConfig& env, std::shared_ptr<const MapPool> maps,
                                           std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                           const EvalOptions& opts);

/// Chaser decision for the current environment state.
LowLevelAction chaser_action(const NavEnv& env);

}  // namespace dynav
