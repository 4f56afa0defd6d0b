#include "dynav/agent/action_map.hpp"

#include <stdexcept>

#include "dynav/envcore/kinematics.hpp"

namespace dynav {

Cell ActionMapGeometry::waypoint_cell(AgentPose pose, int index) const {
  if (index < 0 || index >= size * size) throw std::out_of_range("waypoint index");
  const int r = index / size, c = index % size;
  const Cell fwd = offset(pose.heading);
  const Cell right = offset(rotate_right(pose.heading));
  const int ahead = radius() - r, side = c - radius();
  return {pose.cell.x + ahead * fwd.x + side * right.x, pose.cell.y + ahead * fwd.y + side * right.y};
}

std::vector<std::uint8_t> waypoint_mask(const GridMap& map, AgentPose pose, const ActionMapGeometry& g) {
  const auto counts = action_counts_from(map, pose);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.size * g.size), 0);
  for (int i = 0; i < g.size * g.size; ++i) {
    if (i == g.center()) {
      mask[i] = 1;
      continue;
    }
    const Cell w = g.waypoint_cell(pose, i);
    if (map.blocked(w)) continue;
    const int n = counts[map.index(w)];
    mask[i] = n >= 0 && n <= g.max_actions() ? 1 : 0;
  }
  return mask;
}

WaypointSelection select_waypoint(const nn::Tensor& logits, std::span<const std::uint8_t> mask, Rng& rng,
                                  SelectMode mode, const ActionMapGeometry& g) {
  if (static_cast<int>(logits.size()) != g.size * g.size) {
    throw std::invalid_argument("select_waypoint: logits do not match the action map");
  }
  WaypointSelection s;
  s.dist = nn::categorical_head(logits, mask);
  s.index = mode == SelectMode::Sample ? s.dist.sample(rng.uniform()) : s.dist.argmax();
  s.stop = s.index == g.center();
  return s;
}

}  // namespace dynav
