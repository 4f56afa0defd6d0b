#include "dynav/scenario/motion.hpp"

#include <stdexcept>

namespace dynav {

Cell sample_source_goal(const NavGraph& graph, Rng& rng, Cell from, Cell exclude) {
  const auto& reachable = graph.component_of(from);
  std::size_t excluded = 0;
  for (const Cell c : reachable) excluded += (c == exclude) ? 1 : 0;
  const std::size_t candidates = reachable.size() - excluded;
  if (candidates == 0) throw std::runtime_error("sample_source_goal: no candidate cell");
  std::size_t pick = rng.uniform_index(candidates);
  for (const Cell c : reachable) {
    if (c == exclude) continue;
    if (pick-- == 0) return c;
  }
  throw std::logic_error("sample_source_goal: unreachable");
}

namespace {

void plan_to_new_goal(MotionModel& model, const NavGraph& graph, Rng& rng, Cell agent_cell) {
  model.goal = sample_source_goal(graph, rng, model.current, agent_cell);
  const auto path = graph.shortest_path(model.current, model.goal);
  model.pending_path.assign(path.begin() + 1, path.end());
}

}  // namespace

MotionModel make_motion_model(const NavGraph& graph, Rng& rng, Cell start, Cell agent_cell,
                              double move_probability) {
  if (move_probability < 0.0 || move_probability > 1.0) {
    throw std::invalid_argument("move_probability must lie in [0, 1]");
  }
  MotionModel model;
  model.current = start;
  model.goal = start;
  model.move_probability = move_probability;
  plan_to_new_goal(model, graph, rng, agent_cell);
  return model;
}

void source_step(MotionModel& model, const NavGraph& graph, Rng& rng, Cell agent_cell) {
  const bool move = rng.bernoulli(model.move_probability);
  if (move && !model.pending_path.empty()) {
    model.current = model.pending_path.front();
    model.pending_path.pop_front();
  }
  if (model.pending_path.empty()) plan_to_new_goal(model, graph, rng, agent_cell);
}

}  // namespace dynav
