#include "dynav/metrics/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynav {

int EpisodeRecord::action_count() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const StepRecord& s) {
    return s.action != LowLevelAction::Stop;
  }));
}

InterceptTracker::InterceptTracker(const NavGraph& graph, AgentPose start, Cost cost)
    : graph_(&graph), start_(start), cost_(cost) {
  if (cost_ == Cost::Actions) action_counts_ = action_counts_from(graph.map(), start);
}

std::optional<int> InterceptTracker::cost_to(Cell c) const {
  if (cost_ == Cost::Moves) return graph_->distance(start_.cell, c);
  const int v = action_counts_[graph_->map().index(c)];
  if (v < 0) return std::nullopt;
  return v;
}

void InterceptTracker::step(int t, Cell source) {
  if (locked()) return;
  const auto c = cost_to(source);
  if (c && *c <= t) {
    locked_g_ = *c;
    locked_t_ = t;
    locked_cell_ = source;
  }
}

void dspl_tracker_step(InterceptTracker& tracker, int t, Cell source) { tracker.step(t, source); }

double weighted_term(bool success, int g, int p) {
  if (!success) return 0.0;
  if (g == 0) return 1.0;
  return static_cast<double>(g) / std::max(p, g);
}

namespace {

double dynamic_term(const EpisodeRecord& r, InterceptTracker tracker, int p) {
  for (std::size_t t = 0; t <= r.steps.size(); ++t) tracker.step(static_cast<int>(t), r.source_at(t));
  if (!r.success) return 0.0;
  if (tracker.locked()) return weighted_term(true, *tracker.locked_g(), p);
  // Never locked but still successful: fall back to the stop cell.
  const auto g = tracker.cost_to(r.pose_at(r.steps.size()).cell);
  return weighted_term(true, g.value_or(0), p);
}

}  // namespace

EpisodeTerms episode_terms(const EpisodeRecord& r) {
  if (!r.graph) throw std::invalid_argument("episode record without a map");
  const NavGraph& graph = *r.graph;
  EpisodeTerms out;
  out.success = r.success ? 1.0 : 0.0;
  const int p_moves = r.path_length;
  const int p_actions = r.action_count();
  const Cell goal = r.source_at(r.steps.size());
  if (r.success) {
    out.spl = weighted_term(true, graph.distance(r.start.cell, goal).value_or(0), p_moves);
    out.sna = weighted_term(true, shortest_action_count(graph.map(), r.start, goal).value_or(0),
                            p_actions);
  }
  out.dspl = dynamic_term(r, make_dspl_tracker(graph, r.start), p_moves);
  out.dsna = dynamic_term(r, make_dsna_tracker(graph, r.start), p_actions);
  return out;
}

namespace {

template <typename F>
double mean_term(std::span<const EpisodeRecord> records, F term) {
  if (records.empty()) throw std::invalid_argument("metrics: empty record set");
  double sum = 0.0;
  for (const auto& r : records) sum += term(episode_terms(r));
  return sum / static_cast<double>(records.size());
}

}  // namespace

double spl(std::span<const EpisodeRecord> records) {
  return mean_term(records, [](const EpisodeTerms& t) { return t.spl; });
}
double sna(std::span<const EpisodeRecord> records) {
  return mean_term(records, [](const EpisodeTerms& t) { return t.sna; });
}
double dspl(std::span<const EpisodeRecord> records) {
  return mean_term(records, [](const EpisodeTerms& t) { return t.dspl; });
}
double dsna(std::span<const EpisodeRecord> records) {
  return mean_term(records, [](const EpisodeTerms& t) { return t.dsna; });
}

MetricsReport compute_report(std::span<const EpisodeRecord> records) {
  if (records.empty()) throw std::invalid_argument("metrics: empty record set");
  MetricsReport rep;
  rep.n = records.size();
  for (const auto& r : records) {
    const auto t = episode_terms(r);
    rep.sr += t.success;
    rep.spl += t.spl;
    rep.sna += t.sna;
    rep.dspl += t.dspl;
    rep.dsna += t.dsna;
  }
  const double n = static_cast<double>(rep.n);
  rep.sr /= n;
  rep.spl /= n;
  rep.sna /= n;
  rep.dspl /= n;
  rep.dsna /= n;
  return rep;
}

ChaserResult oracle_chaser(const NavGraph& graph, AgentPose start, std::span<const Cell> trajectory,
                           int max_steps) {
  if (trajectory.empty()) throw std::invalid_argument("oracle_chaser: empty source trajectory");
  ChaserResult out;
  out.path.push_back(start);
  AgentPose pose = start;
  auto source_at = [&](std::size_t t) { return trajectory[std::min(t, trajectory.size() - 1)]; };
  for (int t = 0; t < max_steps; ++t) {
    const Cell source = source_at(static_cast<std::size_t>(t));
    if (pose.cell == source) {
      out.actions.push_back(LowLevelAction::Stop);
      out.path.push_back(pose);
      out.success = true;
      return out;
    }
    if (!graph.connected(pose.cell, source)) return out;
    const auto plan = plan_actions(graph.map(), pose, source);
    pose = step_low_level(graph.map(), pose, plan.front()).pose;
    out.actions.push_back(plan.front());
    out.path.push_back(pose);
  }
  return out;
}

}  // namespace dynav
