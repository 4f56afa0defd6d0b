#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dynav/envcore/grid_map.hpp"

namespace dynav {

enum class LowLevelAction : std::uint8_t { MoveForward = 0, RotateLeft = 1, RotateRight = 2, Stop = 3 };

char action_code(LowLevelAction a);
LowLevelAction action_from_code(char code);

struct StepOutcome {
  AgentPose pose;
  bool collided = false;
};

/// Applies one low-level action. Stop leaves the pose unchanged.
StepOutcome step_low_level(const GridMap& map, AgentPose pose, LowLevelAction action);

/// Minimum action counts over the cell x heading state space, starting from
/// `pose`, indexed by map cell (minimum over arrival headings; -1 when
/// unreachable).
std::vector<int> action_counts_from(const GridMap& map, AgentPose pose);

/// Minimum number of MoveForward/RotateLeft/RotateRight actions that bring
/// the agent from `pose` onto `target` (any final heading).
std::optional<int> shortest_action_count(const GridMap& map, AgentPose pose, Cell target);

/// A minimal action sequence to `target`. Ties prefer MoveForward, then
/// RotateLeft, then RotateRight. Throws std::runtime_error if unreachable.
std::vector<LowLevelAction> plan_actions(const GridMap& map, AgentPose pose, Cell target);

}  // namespace dynav
