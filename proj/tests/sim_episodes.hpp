#pragma once

// Random simulated episodes for metric checks: a noisy pursuer chases a
// (possibly moving) source; episodes end on Stop or after a step budget.

#include <memory>

#include "dynav/common/rng.hpp"
#include "dynav/metrics/metrics.hpp"
#include "dynav/scenario/motion.hpp"

namespace sim {

using namespace dynav;

inline EpisodeRecord simulate_episode(const std::shared_ptr<const NavGraph>& graph, Rng& rng,
                                      bool dynamic, double noise, int max_steps) {
  const auto& cells = graph->largest_component();
  EpisodeRecord r;
  r.graph = graph;
  r.dynamic = dynamic;
  r.start = {cells[rng.uniform_index(cells.size())], heading_from_index(static_cast<int>(rng.uniform_index(4)))};
  Cell source = cells[rng.uniform_index(cells.size())];
  while (source == r.start.cell) source = cells[rng.uniform_index(cells.size())];
  r.source_start = source;
  MotionModel motion;
  if (dynamic) motion = make_motion_model(*graph, rng, source, r.start.cell, 0.3);
  AgentPose pose = r.start;
  for (int t = 0; t < max_steps; ++t) {
    StepRecord s;
    if (pose.cell == source && rng.bernoulli(0.85)) {
      s.action = LowLevelAction::Stop;
    } else if (rng.bernoulli(noise) || pose.cell == source) {
      s.action = static_cast<LowLevelAction>(rng.uniform_index(3));
    } else {
      s.action = plan_actions(graph->map(), pose, source).front();
    }
    if (s.action == LowLevelAction::Stop) {
      s.pose = pose;
      s.source = source;
      r.steps.push_back(s);
      r.success = true;
      break;
    }
    const auto out = step_low_level(graph->map(), pose, s.action);
    if (out.pose.cell != pose.cell) ++r.path_length;
    pose = out.pose;
    if (dynamic) {
      source_step(motion, *graph, rng, pose.cell);
      source = motion.current;
    }
    s.pose = pose;
    s.source = source;
    r.steps.push_back(s);
  }
  return r;
}

}  // namespace sim
