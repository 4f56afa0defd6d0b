#include "dynav/ppo/reward.hpp"

namespace dynav {

double compute_reward(const NavGraph& graph, Cell agent_prev, Cell agent_new, Cell goal, LowLevelAction action,
                      const RewardConfig& cfg) {
  double r = -cfg.time_penalty;
  if (action == LowLevelAction::Stop) {
    if (agent_new == goal) r += cfg.success;
    return r;
  }
  const auto before = graph.distance(agent_prev, goal);
  const auto after = graph.distance(agent_new, goal);
  if (before && after) {
    if (*after < *before) r += cfg.progress;
    if (*after > *before) r -= cfg.progress;
  }
  return r;
}

}  // namespace dynav
