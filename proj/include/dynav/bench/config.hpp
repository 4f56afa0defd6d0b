#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynav/agent/nav_env.hpp"
#include "dynav/agent/profile.hpp"
#include "dynav/ppo/update.hpp"

namespace dynav {

/// Malformed, out-of-range or unknown configuration entries.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SoundSet { Heard, Unheard };
SoundSet parse_sound_set(std::string_view name);
std::string_view to_string(SoundSet s);

/// Every knob of a run. Defaults are the desk-scale static smoke setup.
struct RunConfig {
  std::uint64_t seed = 42;
  std::string out = "out";

  // maps
  int map_width = 8;
  int map_height = 8;
  MapStyle map_style = MapStyle::Open;
  int map_count = 4;

  // network
  std::string profile = "desk16k";
  int view_size = 8;
  int action_map_size = 3;
  int hidden_size = 64;
  bool aux_decoder = false;
  bool continuous_actions = false;

  // environment
  int n_rays = 64;
  double fov_degrees = 90.0;
  double max_range = 8.0;
  int max_steps = 100;
  int max_source_distance = 0;
  TaskKind task = TaskKind::Static;
  double move_probability = 0.3;
  ScenarioKind scenario = ScenarioKind::Clean;
  double second_source_prob = 0.5;
  double distractor_prob = 0.5;
  double distractor_step_prob = 0.5;
  double dynamic_target_prob = 0.0;
  double augment_prob = 0.5;
  int freq_mask_F = 12;
  int time_mask_T = 12;
  int itd_samples = 0;
  double reward_success = 10.0;
  double reward_progress = 0.25;
  double reward_time_penalty = 0.01;
  SoundSet sounds = SoundSet::Heard;
  int train_classes = 4;  // first n training-split classes; 0 = all

  // PPO
  int num_envs = 4;
  int n_steps = 64;
  int epochs = 4;
  int minibatches = 1;
  double lr = 1e-3;
  double gamma = 0.99;
  double tau = 0.95;
  double clip_param = 0.1;
  double value_coef = 0.1;
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;
  bool linear_lr_decay = true;
  bool linear_clip_decay = true;
  bool normalize_advantages = true;
  double aux_weight = 0.0;
  double adam_eps = 1e-5;

  // budgets
  int updates = 250;
  std::int64_t step_budget = 0;  // low-level steps; 0 = unlimited
  int checkpoint_every = 0;      // 0 = final checkpoint only

  // evaluation
  int eval_episodes = 200;
  SelectMode eval_mode = SelectMode::Argmax;
  std::uint64_t eval_offset = 1000000000ULL;
  int eval_envs = 1;

  // throughput bench
  double bench_duration = 2.0;
  double bench_warmup = 0.5;

  /// Sets one key from its textual value; throws ConfigError.
  void set(std::string_view key, std::string_view value);
  /// Range checks that involve several keys.
  void validate() const;
  /// Resolved `key = value` listing that parses back to the same config.
  std::string to_text() const;

  bool operator==(const RunConfig&) const = default;
};

/// All recognised keys in listing order.
std::vector<std::string> config_keys();

/// Flat `key = value` lines ('#' starts a comment) or a flat JSON object.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

SelectMode parse_select_mode(std::string_view name);
std::string_view to_string(SelectMode m);

/// Class sets used by a run.
std::vector<int> training_classes(const RunConfig& cfg, const SoundBank& bank);
std::vector<int> target_classes(const RunConfig& cfg, const SoundBank& bank);

NetworkProfile network_profile(const RunConfig& cfg);
EnvConfig env_config(const RunConfig& cfg, const SoundBank& bank);
PpoConfig ppo_config(const RunConfig& cfg);

}  // namespace dynav
