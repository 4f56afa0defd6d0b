#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynav/bench/config.hpp"
#include "dynav/ppo/trainer.hpp"

namespace dynav {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shared read-only state derived from a config.
struct RunContext {
  RunConfig cfg;
  SeedStreams seeds;
  std::shared_ptr<const MapPool> maps;
  std::shared_ptr<const SoundBank> bank;
  EnvConfig env;
  NetworkProfile profile;
};

RunContext make_context(const RunConfig& cfg);

struct TrainSummary {
  int updates = 0;
  std::int64_t low_level_steps = 0;
  std::filesystem::path checkpoint;
  UpdateReport last;
};

/// Trains until `updates` or the step budget runs out. The budget is never
/// exceeded: an update is skipped when its worst-case step count would
/// overshoot. Writes config.txt, stats.csv and checkpoint files into
/// `out_dir`; `progress` (optional) receives the stats rows as they come.
TrainSummary train_run(const RunContext& ctx, const std::filesystem::path& out_dir,
                       std::ostream* progress = nullptr);

/// Policy for `ctx` with weights from `checkpoint` (CheckpointError when it
/// is missing or does not match the network).
PolicyNetwork load_policy(const RunContext& ctx, const std::filesystem::path& checkpoint);

struct EvalSummary {
  std::vector<EpisodeRecord> records;
  MetricsReport report;
  MetricsReport oracle;  // chaser on the same episodes
};

/// Evaluates on episodes eval_offset .. eval_offset + eval_episodes - 1 and
/// writes trajectories.jsonl, metrics.csv and config.txt into `out_dir`
/// (skipped when `out_dir` is empty).
EvalSummary eval_run(const RunContext& ctx, const PolicyNetwork& policy, const std::filesystem::path& out_dir);

std::string report_csv(const std::vector<std::pair<std::string, MetricsReport>>& rows);
/// Fixed-width table of the same rows.
std::string report_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);

struct CrossCheckResult {
  std::size_t episodes = 0;
  std::vector<std::string> mismatches;
  MetricsReport report;
  double oracle_success = 0.0;  // chaser on each logged source trajectory
  bool ok() const { return mismatches.empty(); }
};

/// Re-derives every logged quantity from first principles: pose
/// kinematics, rewards, success, path length, and all four metric terms
/// by exhaustive scans independent of the online trackers. Static episodes
/// must also satisfy DSPL == SPL and DSNA == SNA.
CrossCheckResult cross_check(const std::vector<EpisodeRecord>& records, const RewardConfig& reward, int max_steps);

}  // namespace dynav
