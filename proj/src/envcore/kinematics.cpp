#include "dynav/envcore/kinematics.hpp"

#include <queue>
#include <stdexcept>

namespace dynav {

char action_code(LowLevelAction a) {
  switch (a) {
    case LowLevelAction::MoveForward: return 'F';
    case LowLevelAction::RotateLeft: return 'L';
    case LowLevelAction::RotateRight: return 'R';
    case LowLevelAction::Stop: return 'S';
  }
  return '?';
}

LowLevelAction action_from_code(char code) {
  switch (code) {
    case 'F': return LowLevelAction::MoveForward;
    case 'L': return LowLevelAction::RotateLeft;
    case 'R': return LowLevelAction::RotateRight;
    case 'S': return LowLevelAction::Stop;
    default: throw std::invalid_argument(std::string("unknown action code '") + code + "'");
  }
}

StepOutcome step_low_level(const GridMap& map, AgentPose pose, LowLevelAction action) {
  switch (action) {
    case LowLevelAction::RotateLeft: pose.heading = rotate_left(pose.heading); break;
    case LowLevelAction::RotateRight: pose.heading = rotate_right(pose.heading); break;
    case LowLevelAction::MoveForward: {
      const Cell next = pose.cell + offset(pose.heading);
      if (map.blocked(next)) return {pose, true};
      pose.cell = next;
      break;
    }
    case LowLevelAction::Stop: break;
  }
  return {pose, false};
}

namespace {

int state_of(const GridMap& map, Cell c, Heading h) { return map.index(c) * 4 + static_cast<int>(h); }

std::vector<int> forward_bfs(const GridMap& map, AgentPose pose) {
  std::vector<int> dist(static_cast<std::size_t>(map.cell_count()) * 4, -1);
  if (map.blocked(pose.cell)) return dist;
  std::queue<AgentPose> q;
  dist[state_of(map, pose.cell, pose.heading)] = 0;
  q.push(pose);
  constexpr LowLevelAction kActions[3] = {LowLevelAction::MoveForward, LowLevelAction::RotateLeft,
                                          LowLevelAction::RotateRight};
  while (!q.empty()) {
    const AgentPose p = q.front();
    q.pop();
    const int d = dist[state_of(map, p.cell, p.heading)];
    for (const auto a : kActions) {
      const auto out = step_low_level(map, p, a);
      if (out.collided) continue;
      int& slot = dist[state_of(map, out.pose.cell, out.pose.heading)];
      if (slot == -1) {
        slot = d + 1;
        q.push(out.pose);
      }
    }
  }
  return dist;
}

// Actions-to-go from every state to `target`, searching predecessors.
std::vector<int> backward_bfs(const GridMap& map, Cell target) {
  std::vector<int> togo(static_cast<std::size_t>(map.cell_count()) * 4, -1);
  std::queue<AgentPose> q;
  for (int k = 0; k < 4; ++k) {
    togo[state_of(map, target, heading_from_index(k))] = 0;
    q.push({target, heading_from_index(k)});
  }
  while (!q.empty()) {
    const AgentPose p = q.front();
    q.pop();
    const int d = togo[state_of(map, p.cell, p.heading)];
    auto visit = [&](AgentPose prev) {
      int& slot = togo[state_of(map, prev.cell, prev.heading)];
      if (slot == -1) {
        slot = d + 1;
        q.push(prev);
      }
    };
    const Cell behind = p.cell - offset(p.heading);
    if (!map.blocked(behind)) visit({behind, p.heading});
    visit({p.cell, rotate_right(p.heading)});  // RotateLeft from here lands on p
    visit({p.cell, rotate_left(p.heading)});   // RotateRight from here lands on p
  }
  return togo;
}

}  // namespace

std::vector<int> action_counts_from(const GridMap& map, AgentPose pose) {
  const auto dist = forward_bfs(map, pose);
  std::vector<int> out(map.cell_count(), -1);
  for (int c = 0; c < map.cell_count(); ++c) {
    for (int k = 0; k < 4; ++k) {
      const int d = dist[c * 4 + k];
      if (d >= 0 && (out[c] < 0 || d < out[c])) out[c] = d;
    }
  }
  return out;
}

std::optional<int> shortest_action_count(const GridMap& map, AgentPose pose, Cell target) {
  if (map.blocked(pose.cell) || map.blocked(target)) {
    throw std::invalid_argument("shortest_action_count: blocked endpoint");
  }
  const int d = action_counts_from(map, pose)[map.index(target)];
  if (d < 0) return std::nullopt;
  return d;
}

std::vector<LowLevelAction> plan_actions(const GridMap& map, AgentPose pose, Cell target) {
  if (map.blocked(pose.cell) || map.blocked(target)) {
    throw std::invalid_argument("plan_actions: blocked endpoint");
  }
  const auto togo = backward_bfs(map, target);
  int remaining = togo[state_of(map, pose.cell, pose.heading)];
  if (remaining < 0) throw std::runtime_error("plan_actions: target unreachable");
  std::vector<LowLevelAction> plan;
  plan.reserve(remaining);
  constexpr LowLevelAction kPreference[3] = {LowLevelAction::MoveForward, LowLevelAction::RotateLeft,
                                             LowLevelAction::RotateRight};
  while (remaining > 0) {
    bool advanced = false;
    for (const auto a : kPreference) {
      const auto out = step_low_level(map, pose, a);
      if (out.collided) continue;
      if (togo[state_of(map, out.pose.cell, out.pose.heading)] == remaining - 1) {
        plan.push_back(a);
        pose = out.pose;
        --remaining;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw std::logic_error("plan_actions: inconsistent action distances");
  }
  return plan;
}

}  // namespace dynav
