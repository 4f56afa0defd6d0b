#pragma once

#include <cstdint>
#include <optional>

#include "dynav/envcore/grid_map.hpp"

namespace dynav {

/// Accumulated continuous motion of one agent. Positions are metric with
/// x east and y north; cells convert as (x, y) = (col, -row) * resolution.
struct DiscretizerState {
  std::optional<std::uint64_t> episode;
  Cell discretized;
  double x = 0.0;
  double y = 0.0;
};

struct DiscreteTarget {
  Cell cell;
  bool idle = true;  // target equals the current cell
};

/// Accumulate-then-snap conversion of a (velocity, angular velocity) action
/// into a grid target. The accumulator restarts at the current cell on a
/// new episode or when the agent is not on the last emitted cell. Angles
/// are measured counter-clockwise from `frame_degrees` (0 = east). Each
/// axis advances by whole resolution steps plus one more when the
/// remainder exceeds `threshold` (resolution / 2 when not given).
/// Throws std::invalid_argument for v outside [0,1], omega outside
/// [-90,90] or a non-positive resolution.
DiscreteTarget discretize_continuous(double v, double omega_degrees, DiscretizerState& state,
                                     std::uint64_t episode_id, Cell current, double resolution,
                                     double frame_degrees = 0.0, std::optional<double> threshold = {});

}  // namespace dynav
