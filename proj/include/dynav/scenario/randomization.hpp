#pragma once

#include <span>
#include <vector>

#include "dynav/acoustics/spectrogram.hpp"
#include "dynav/common/rng.hpp"

namespace dynav {

/// Probabilities of the complex-audio randomization pipeline. All coin
/// flips default to fair coins.
struct ScenarioKnobs {
  double second_source_prob = 0.5;
  double distractor_prob = 0.5;
  double distractor_step_prob = 0.5;
  double dynamic_target_prob = 0.0;
};

/// Per-episode draws. Second and distractor sounds always come from the
/// training pool excluding the target.
struct EpisodeScenario {
  int target_class = 0;
  bool include_second = false;
  int second_class = -1;
  bool include_distractor = false;
  bool dynamic_target = false;
};

/// Training-pool classes other than `target_class`.
std::vector<int> perturbation_pool(std::span<const int> training_pool, int target_class);

/// Draw order: include_second, second_class (only when included),
/// include_distractor, dynamic_target. Throws if the pool holds no class
/// other than the target while a second source is requested.
EpisodeScenario sample_episode_scenario(Rng& rng, std::span<const int> training_pool,
                                        int target_class, const ScenarioKnobs& knobs);

struct StepSources {
  std::vector<SourceEmission> emissions;  // target first
  bool distractor_present = false;
};

/// Emissions audible at one step: the target, the co-located second sound
/// when enabled, and (with per-step probability) one freshly drawn
/// distractor at a free cell other than the target's.
StepSources compose_step_sources(const EpisodeScenario& scenario, const NavGraph& graph, Rng& rng,
                                 Cell target_cell, std::span<const int> training_pool,
                                 const ScenarioKnobs& knobs);

}  // namespace dynav
