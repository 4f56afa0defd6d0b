#include "dynav/scenario/randomization.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynav {

std::vector<int> perturbation_pool(std::span<const int> training_pool, int target_class) {
  std::vector<int> out;
  out.reserve(training_pool.size());
  for (int c : training_pool) {
    if (c != target_class) out.push_back(c);
  }
  return out;
}

EpisodeScenario sample_episode_scenario(Rng& rng, std::span<const int> training_pool,
                                        int target_class, const ScenarioKnobs& knobs) {
  EpisodeScenario s;
  s.target_class = target_class;
  const auto pool = perturbation_pool(training_pool, target_class);
  s.include_second = rng.bernoulli(knobs.second_source_prob);
  if (s.include_second) {
    if (pool.empty()) throw std::invalid_argument("second source requested but pool is empty");
    s.second_class = pool[rng.uniform_index(pool.size())];
  }
  s.include_distractor = rng.bernoulli(knobs.distractor_prob) && !pool.empty();
  s.dynamic_target = rng.bernoulli(knobs.dynamic_target_prob);
  return s;
}

StepSources compose_step_sources(const EpisodeScenario& scenario, const NavGraph& graph, Rng& rng,
                                 Cell target_cell, std::span<const int> training_pool,
                                 const ScenarioKnobs& knobs) {
  StepSources out;
  out.emissions.push_back({scenario.target_class, target_cell});
  if (scenario.include_second) out.emissions.push_back({scenario.second_class, target_cell});
  // The per-step coin is flipped every step so the stream advances the same
  // way whether or not the episode carries distractors.
  const bool audible = rng.bernoulli(knobs.distractor_step_prob);
  if (scenario.include_distractor && audible) {
    const auto pool = perturbation_pool(training_pool, scenario.target_class);
    const int cls = pool[rng.uniform_index(pool.size())];
    const auto& cells = graph.largest_component();
    const std::size_t n_candidates =
        cells.size() - static_cast<std::size_t>(std::count(cells.begin(), cells.end(), target_cell));
    if (n_candidates > 0) {
      std::size_t pick = rng.uniform_index(n_candidates);
      for (const Cell c : cells) {
        if (c == target_cell) continue;
        if (pick-- == 0) {
          out.emissions.push_back({cls, c});
          out.distractor_present = true;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace dynav
