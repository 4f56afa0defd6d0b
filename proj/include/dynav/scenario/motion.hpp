#pragma once

#include <deque>

#include "dynav/common/rng.hpp"
#include "dynav/envcore/nav_graph.hpp"

namespace dynav {

/// Moving-source state: the source walks the shortest path towards a
/// randomly drawn goal, advancing one cell per step with probability
/// move_probability, and draws a new goal whenever it arrives.
struct MotionModel {
  Cell current;
  Cell goal;
  std::deque<Cell> pending_path;  // remaining cells after `current`, ending at `goal`
  double move_probability = 0.3;
};

/// Uniform over cells reachable from `from`, excluding `exclude`.
/// Throws std::runtime_error when no candidate exists.
Cell sample_source_goal(const NavGraph& graph, Rng& rng, Cell from, Cell exclude);

MotionModel make_motion_model(const NavGraph& graph, Rng& rng, Cell start, Cell agent_cell,
                              double move_probability);

/// One source step. Draws exactly one Bernoulli per call (plus a goal draw
/// on arrival), so the stream consumption is independent of the outcome.
void source_step(MotionModel& model, const NavGraph& graph, Rng& rng, Cell agent_cell);

}  // namespace dynav
