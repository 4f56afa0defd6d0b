#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dynav/envcore/kinematics.hpp"
#include "dynav/envcore/nav_graph.hpp"

namespace dynav {

/// One low-level step: the action taken, the agent pose after it, the
/// source cell after the source's own step, and the sub-step reward.
struct StepRecord {
  LowLevelAction action = LowLevelAction::Stop;
  AgentPose pose;
  Cell source;
  double reward = 0.0;
};

struct EpisodeRecord {
  std::uint64_t episode_id = 0;
  std::uint64_t seed = 0;
  std::shared_ptr<const NavGraph> graph;
  bool dynamic = false;
  AgentPose start;
  Cell source_start;
  std::vector<StepRecord> steps;
  bool success = false;
  int path_length = 0;  // executed (non-colliding) forward moves

  /// Source cell after t low-level steps (t = 0 is the episode start).
  Cell source_at(std::size_t t) const { return t == 0 ? source_start : steps[t - 1].source; }
  AgentPose pose_at(std::size_t t) const { return t == 0 ? start : steps[t - 1].pose; }
  /// Low-level actions other than Stop.
  int action_count() const;
};

/// Online earliest-intersection tracker. At elapsed step t it locks the
/// first source position whose shortest cost from the start does not
/// exceed t; the lock never changes afterwards.
class InterceptTracker {
 public:
  enum class Cost { Moves, Actions };
  InterceptTracker(const NavGraph& graph, AgentPose start, Cost cost);

  void step(int t, Cell source);
  bool locked() const { return locked_g_.has_value(); }
  std::optional<int> locked_g() const { return locked_g_; }
  std::optional<int> locked_t() const { return locked_t_; }
  Cell locked_cell() const { return locked_cell_; }
  /// Cost from the start to `c`; nullopt when unreachable.
  std::optional<int> cost_to(Cell c) const;

 private:
  const NavGraph* graph_;
  AgentPose start_;
  Cost cost_;
  std::vector<int> action_counts_;
  std::optional<int> locked_g_;
  std::optional<int> locked_t_;
  Cell locked_cell_;
};

/// DSPL tracker: geodesic move counts against elapsed low-level steps.
inline InterceptTracker make_dspl_tracker(const NavGraph& g, AgentPose start) {
  return InterceptTracker(g, start, InterceptTracker::Cost::Moves);
}
/// DSNA tracker: cell x heading action counts against elapsed steps.
inline InterceptTracker make_dsna_tracker(const NavGraph& g, AgentPose start) {
  return InterceptTracker(g, start, InterceptTracker::Cost::Actions);
}
void dspl_tracker_step(InterceptTracker& tracker, int t, Cell source);

/// Per-episode weighted terms, each in [0, 1].
struct EpisodeTerms {
  double success = 0.0;
  double spl = 0.0;
  double sna = 0.0;
  double dspl = 0.0;
  double dsna = 0.0;
};

/// S * g / max(p, g), with the degenerate g == 0 case defined as S.
double weighted_term(bool success, int g, int p);

/// SPL and SNA use the final source cell as goal (the start cell on static
/// episodes). DSPL and DSNA replay the trackers over the record.
EpisodeTerms episode_terms(const EpisodeRecord& record);

struct MetricsReport {
  double sr = 0.0;
  double spl = 0.0;
  double sna = 0.0;
  double dspl = 0.0;
  double dsna = 0.0;
  std::size_t n = 0;
  bool operator==(const MetricsReport&) const = default;
};

/// Each throws std::invalid_argument on an empty record set.
double spl(std::span<const EpisodeRecord> records);
double sna(std::span<const EpisodeRecord> records);
double dspl(std::span<const EpisodeRecord> records);
double dsna(std::span<const EpisodeRecord> records);
MetricsReport compute_report(std::span<const EpisodeRecord> records);

/// Scripted pursuer with full knowledge: each step it re-plans a minimal
/// action sequence to the source's current cell and executes its first
/// action, calling Stop once on the source. `trajectory[t]` is the source
/// cell at step t; the source rests on its last entry afterwards.
struct ChaserResult {
  bool success = false;
  std::vector<AgentPose> path;  // poses from the start onwards
  std::vector<LowLevelAction> actions;
};
ChaserResult oracle_chaser(const NavGraph& graph, AgentPose start, std::span<const Cell> trajectory,
                           int max_steps);

}  // namespace dynav
