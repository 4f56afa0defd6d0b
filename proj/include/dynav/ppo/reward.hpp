#pragma once

#include "dynav/envcore/kinematics.hpp"
#include "dynav/envcore/nav_graph.hpp"

namespace dynav {

struct RewardConfig {
  double success = 10.0;
  double progress = 0.25;
  double time_penalty = 0.01;
};

/// Reward of one low-level step. `goal` is the source cell the step was
/// taken against (the source's current cell on dynamic tasks). Progress is
/// +progress / -progress when the geodesic distance to `goal` shrinks /
/// grows; Stop on `goal` earns `success`; every step pays time_penalty.
double compute_reward(const NavGraph& graph, Cell agent_prev, Cell agent_new, Cell goal, LowLevelAction action,
                      const RewardConfig& cfg = {});

}  // namespace dynav
