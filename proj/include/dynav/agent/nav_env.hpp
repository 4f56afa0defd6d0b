#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "dynav/acoustics/sound_bank.hpp"
#include "dynav/agent/action_map.hpp"
#include "dynav/agent/observation.hpp"
#include "dynav/common/seeding.hpp"
#include "dynav/metrics/metrics.hpp"
#include "dynav/ppo/reward.hpp"
#include "dynav/scenario/augment.hpp"
#include "dynav/scenario/motion.hpp"
#include "dynav/scenario/randomization.hpp"

namespace dynav {

enum class TaskKind { Static, Dynamic };
enum class ScenarioKind { Clean, Complex };

TaskKind parse_task(std::string_view name);
ScenarioKind parse_scenario(std::string_view name);
std::string_view to_string(TaskKind t);
std::string_view to_string(ScenarioKind s);

using MapPool = std::vector<std::shared_ptr<const NavGraph>>;

/// `count` maps generated from the map-generation stream.
MapPool make_map_pool(std::uint64_t map_seed, int count, int width, int height, MapStyle style);

struct EnvConfig {
  int sample_rate = 16000;
  int n_rays = 64;
  double fov_degrees = 90.0;
  double max_range = 8.0;
  int action_map_size = 3;
  int max_steps = 100;  // low-level steps per episode
  int max_source_distance = 0;  // geodesic bound on the initial source cell; 0 = none
  TaskKind task = TaskKind::Static;
  double move_probability = 0.3;
  ScenarioKind scenario = ScenarioKind::Clean;
  ScenarioKnobs knobs;
  AugmentSpec augment;
  double augment_prob = 0.5;
  std::vector<int> target_classes;  // episodes draw their target from these
  std::vector<int> training_pool;   // second sources and distractors come from these
  int itd_samples = 0;
  RewardConfig reward;
};

/// Result of executing one waypoint decision.
struct WaypointOutcome {
  int sub_steps = 0;
  double reward = 0.0;
  bool done = false;
  bool success = false;
};

/// Grid-world audio-goal environment. One instance owns its episode state;
/// the map pool and sound bank are shared read-only.
class NavEnv {
 public:
  NavEnv(EnvConfig cfg, std::shared_ptr<const MapPool> maps, std::shared_ptr<const SoundBank> bank,
         SeedStreams seeds);

  /// Starts episode `episode_index`; every draw comes from streams keyed by
  /// that index, so episodes are reproducible in isolation.
  const Observation& reset(std::uint64_t episode_index);

  const Observation& observation() const { return obs_; }
  std::vector<std::uint8_t> action_mask() const;
  const ActionMapGeometry& geometry() const { return geometry_; }

  /// Plans to the chosen waypoint and executes the low-level actions until
  /// it is reached or the episode ends. The centre index stops.
  WaypointOutcome step_waypoint(int index);
  /// Drives to an arbitrary free reachable cell (continuous-action mode).
  WaypointOutcome step_to_cell(Cell target);
  /// One low-level action; the observation is refreshed afterwards.
  WaypointOutcome step_low_level(LowLevelAction action);

  bool done() const { return done_; }
  const EpisodeRecord& record() const { return record_; }
  const EpisodeScenario& scenario() const { return scenario_; }
  AgentPose pose() const { return pose_; }
  Cell source_cell() const { return motion_.current; }
  bool source_moves() const { return moving_; }
  const NavGraph& graph() const { return *graph_; }
  const EnvConfig& config() const { return cfg_; }
  std::int64_t steps() const { return static_cast<std::int64_t>(record_.steps.size()); }

 private:
  double sub_step(LowLevelAction action);
  void observe();

  EnvConfig cfg_;
  std::shared_ptr<const MapPool> maps_;
  std::shared_ptr<const SoundBank> bank_;
  SeedStreams seeds_;
  ActionMapGeometry geometry_;

  std::shared_ptr<const NavGraph> graph_;
  Rng scenario_rng_;
  Rng motion_rng_;
  Rng augment_rng_;
  EpisodeScenario scenario_;
  MotionModel motion_;
  bool moving_ = false;
  AgentPose pose_;
  StepSources sources_;
  Observation obs_;
  EpisodeRecord record_;
  bool done_ = true;
};

}  // namespace dynav
