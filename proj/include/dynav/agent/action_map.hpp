#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynav/common/rng.hpp"
#include "dynav/envcore/grid_map.hpp"
#include "dynav/nn/categorical.hpp"

namespace dynav {

/// K x K waypoint grid centred on the agent, row-major, row 0 furthest
/// ahead. The centre entry is Stop.
struct ActionMapGeometry {
  int size = 3;

  int center() const { return (size * size) / 2; }
  int radius() const { return size / 2; }
  /// Low-level action budget for a waypoint: enough for any cell of the
  /// grid on open ground (turn, walk, turn, walk).
  int max_actions() const { return 2 * radius() + 2; }
  Cell waypoint_cell(AgentPose pose, int index) const;
};

/// 1 for the centre and for each waypoint that is free and reachable
/// within max_actions() low-level actions on `map`.
std::vector<std::uint8_t> waypoint_mask(const GridMap& map, AgentPose pose, const ActionMapGeometry& geometry);

enum class SelectMode { Sample, Argmax };

struct WaypointSelection {
  int index = 0;
  bool stop = false;
  nn::Categorical dist;
};

/// Masked categorical over the logits; Sample consumes one uniform draw,
/// Argmax none.
WaypointSelection select_waypoint(const nn::Tensor& logits, std::span<const std::uint8_t> mask, Rng& rng,
                                  SelectMode mode, const ActionMapGeometry& geometry);

}  // namespace dynav
