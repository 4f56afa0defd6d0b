#include "dynav/bench/runner.hpp"

#include <array>
#include <deque>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dynav/bench/trajectory_log.hpp"

namespace dynav {

namespace fs = std::filesystem;

RunContext make_context(const RunConfig& cfg) {
  cfg.validate();
  RunContext ctx;
  ctx.cfg = cfg;
  ctx.seeds = seed_everything(cfg.seed);
  ctx.maps = std::make_shared<const MapPool>(
      make_map_pool(ctx.seeds.map_gen, cfg.map_count, cfg.map_width, cfg.map_height, cfg.map_style));
  auto bank = std::make_shared<const SoundBank>();
  ctx.env = env_config(cfg, *bank);
  ctx.bank = std::move(bank);
  ctx.profile = network_profile(cfg);
  return ctx;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

TrainSummary train_run(const RunContext& ctx, const fs::path& out_dir, std::ostream* progress) {
  fs::create_directories(out_dir);
  write_text(out_dir / "config.txt", ctx.cfg.to_text());
  const auto cfg = ppo_config(ctx.cfg);
  Trainer trainer(cfg, ctx.env, ctx.maps, ctx.bank, ctx.profile, ctx.seeds, ctx.cfg.updates);
  const std::int64_t worst_case = static_cast<std::int64_t>(cfg.num_envs) * cfg.n_steps *
                                  ActionMapGeometry{ctx.cfg.action_map_size}.max_actions();

  std::ofstream stats(out_dir / "stats.csv", std::ios::binary);
  stats << stats_csv_header() << '\n';
  if (progress) *progress << stats_csv_header() << '\n';
  TrainSummary summary;
  for (int u = 0; u < ctx.cfg.updates; ++u) {
    if (ctx.cfg.step_budget > 0 && trainer.low_level_steps() + worst_case > ctx.cfg.step_budget) break;
    summary.last = trainer.train_update();
    stats << stats_csv_row(summary.last) << '\n';
    if (progress) *progress << stats_csv_row(summary.last) << std::endl;
    if (ctx.cfg.checkpoint_every > 0 && (u + 1) % ctx.cfg.checkpoint_every == 0) {
      nn::save_checkpoint(trainer.policy().params(), out_dir / ("checkpoint_" + std::to_string(u + 1) + ".bin"));
    }
  }
  summary.updates = trainer.updates();
  summary.low_level_steps = trainer.low_level_steps();
  summary.checkpoint = out_dir / "checkpoint.bin";
  nn::save_checkpoint(trainer.policy().params(), summary.checkpoint);
  return summary;
}

PolicyNetwork load_policy(const RunContext& ctx, const fs::path& checkpoint) {
  PolicyNetwork policy(ctx.profile, ctx.seeds.init);
  if (!fs::exists(checkpoint)) throw CheckpointError("checkpoint not found: " + checkpoint.string());
  try {
    nn::load_checkpoint(policy.params(), checkpoint);
  } catch (const std::exception& e) {
    throw CheckpointError("cannot load checkpoint " + checkpoint.string() + ": " + e.what());
  }
  return policy;
}

EvalSummary eval_run(const RunContext& ctx, const PolicyNetwork& policy, const fs::path& out_dir) {
  EvalOptions opts;
  opts.episodes = ctx.cfg.eval_episodes;
  opts.num_envs = ctx.cfg.eval_envs;
  opts.mode = ctx.cfg.eval_mode;
  opts.episode_offset = ctx.cfg.eval_offset;
  EvalSummary s;
  s.records = evaluate_policy(policy, ctx.env, ctx.maps, ctx.bank, ctx.seeds, opts);
  s.report = compute_report(s.records);
  s.oracle = compute_report(evaluate_oracle(ctx.env, ctx.maps, ctx.bank, ctx.seeds, opts));
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(out_dir / "config.txt", ctx.cfg.to_text());
    write_trajectory_log(out_dir / "trajectories.jsonl", s.records);
    write_text(out_dir / "metrics.csv", report_csv({{"policy", s.report}, {"oracle", s.oracle}}));
  }
  return s;
}

std::string report_csv(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::ostringstream out;
  out << std::setprecision(17) << "agent,episodes,sr,spl,sna,dspl,dsna\n";
  for (const auto& [name, r] : rows) {
    out << name << ',' << r.n << ',' << r.sr << ',' << r.spl << ',' << r.sna << ',' << r.dspl << ',' << r.dsna
        << '\n';
  }
  return out.str();
}

std::string report_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "agent" << std::right << std::setw(9) << "episodes";
  for (const char* h : {"SR", "SPL", "SNA", "DSPL", "DSNA"}) out << std::setw(9) << h;
  out << '\n' << std::fixed << std::setprecision(3);
  for (const auto& [name, r] : rows) {
    out << std::left << std::setw(10) << name << std::right << std::setw(9) << r.n;
    for (double v : {r.sr, r.spl, r.sna, r.dspl, r.dsna}) out << std::setw(9) << v;
    out << '\n';
  }
  return out.str();
}

namespace {

// Plain BFS over the free cells; kept separate from NavGraph's table.
std::vector<int> scan_moves(const GridMap& map, Cell from) {
  std::vector<int> d(map.cell_count(), -1);
  std::deque<Cell> q{from};
  d[map.index(from)] = 0;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    for (const Cell o : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
      const Cell n = c + o;
      if (map.is_free(n) && d[map.index(n)] < 0) {
        d[map.index(n)] = d[map.index(c)] + 1;
        q.push_back(n);
      }
    }
  }
  return d;
}

// BFS over (cell, heading) with forward / left / right moves.
std::vector<int> scan_actions(const GridMap& map, AgentPose from) {
  std::vector<int> d(map.cell_count() * 4, -1);
  auto key = [&](AgentPose p) { return map.index(p.cell) * 4 + static_cast<int>(p.heading); };
  std::deque<AgentPose> q{from};
  d[key(from)] = 0;
  while (!q.empty()) {
    const AgentPose p = q.front();
    q.pop_front();
    std::array<AgentPose, 3> next = {AgentPose{p.cell + offset(p.heading), p.heading},
                                     AgentPose{p.cell, rotate_left(p.heading)},
                                     AgentPose{p.cell, rotate_right(p.heading)}};
    for (const auto& n : next) {
      if (map.blocked(n.cell) || d[key(n)] >= 0) continue;
      d[key(n)] = d[key(p)] + 1;
      q.push_back(n);
    }
  }
  std::vector<int> best(map.cell_count(), -1);
  for (int c = 0; c < map.cell_count(); ++c) {
    for (int h = 0; h < 4; ++h) {
      const int v = d[c * 4 + h];
      if (v >= 0 && (best[c] < 0 || v < best[c])) best[c] = v;
    }
  }
  return best;
}

double scan_term(bool success, int g, int p) {
  if (!success) return 0.0;
  return g == 0 ? 1.0 : static_cast<double>(g) / (p > g ? p : g);
}

// Earliest t whose source cell is within cost t of the start.
double scan_dynamic(const EpisodeRecord& r, const std::vector<int>& cost, int p) {
  if (!r.success) return 0.0;
  const GridMap& map = r.graph->map();
  for (std::size_t t = 0; t <= r.steps.size(); ++t) {
    const int c = cost[map.index(r.source_at(t))];
    if (c >= 0 && c <= static_cast<int>(t)) return scan_term(true, c, p);
  }
  const int c = cost[map.index(r.pose_at(r.steps.size()).cell)];
  return scan_term(true, c < 0 ? 0 : c, p);
}

}  // namespace

CrossCheckResult cross_check(const std::vector<EpisodeRecord>& records, const RewardConfig& reward, int max_steps) {
  if (records.empty()) throw EmptyLogError("cross_check: no episodes");
  CrossCheckResult res;
  res.episodes = records.size();
  res.report = compute_report(records);
  MetricsReport scan;
  scan.n = records.size();
  int oracle_hits = 0;
  for (const auto& r : records) {
    const std::string tag = "episode " + std::to_string(r.episode_id) + ": ";
    auto fail = [&](const std::string& what) { res.mismatches.push_back(tag + what); };
    const GridMap& map = r.graph->map();
    const std::size_t T = r.steps.size();

    int moved = 0;
    for (std::size_t t = 0; t < T; ++t) {
      const auto& s = r.steps[t];
      const AgentPose prev = r.pose_at(t);
      if (step_low_level(map, prev, s.action).pose != s.pose) fail("pose does not follow from the action");
      if (s.pose.cell != prev.cell) ++moved;
      if (s.action == LowLevelAction::Stop && t + 1 != T) fail("Stop before the last step");
      if (s.action == LowLevelAction::Stop && s.source != r.source_at(t)) fail("source moved on Stop");
      const double expect = compute_reward(*r.graph, prev.cell, s.pose.cell, r.source_at(t), s.action, reward);
      if (expect != s.reward) fail("reward differs from recomputation");
    }
    if (moved != r.path_length) fail("path length differs from the pose sequence");
    const bool stopped = T > 0 && r.steps.back().action == LowLevelAction::Stop;
    if (!stopped && static_cast<int>(T) != max_steps) fail("episode ended without Stop or step limit");
    const bool success = stopped && r.pose_at(T).cell == r.source_at(T);
    if (success != r.success) fail("success flag differs from the final state");
    if (!r.dynamic) {
      for (std::size_t t = 0; t <= T; ++t) {
        if (r.source_at(t) != r.source_start) {
          fail("static source moved");
          break;
        }
      }
    }

    const auto moves = scan_moves(map, r.start.cell);
    const auto actions = scan_actions(map, r.start);
    const Cell goal = r.source_at(T);
    const auto terms = episode_terms(r);
    const double spl = scan_term(r.success, moves[map.index(goal)], r.path_length);
    const double sna = scan_term(r.success, actions[map.index(goal)], r.action_count());
    const double dspl = scan_dynamic(r, moves, r.path_length);
    const double dsna = scan_dynamic(r, actions, r.action_count());
    if (terms.spl != spl) fail("SPL term differs from the scan");
    if (terms.sna != sna) fail("SNA term differs from the scan");
    if (terms.dspl != dspl) fail("DSPL term differs from the scan");
    if (terms.dsna != dsna) fail("DSNA term differs from the scan");
    if (!r.dynamic && (terms.dspl != terms.spl || terms.dsna != terms.sna)) fail("static DSPL/DSNA differ from SPL/SNA");
    scan.sr += r.success ? 1.0 : 0.0;
    scan.spl += spl;
    scan.sna += sna;
    scan.dspl += dspl;
    scan.dsna += dsna;

    std::vector<Cell> trajectory;
    for (std::size_t t = 0; t <= T; ++t) trajectory.push_back(r.source_at(t));
    oracle_hits += oracle_chaser(*r.graph, r.start, trajectory, max_steps).success ? 1 : 0;
  }
  const double n = static_cast<double>(records.size());
  scan.sr /= n;
  scan.spl /= n;
  scan.sna /= n;
  scan.dspl /= n;
  scan.dsna /= n;
  if (!(scan == res.report)) res.mismatches.push_back("aggregate report differs from the scan");
  res.oracle_success = oracle_hits / n;
  return res;
}

}  // namespace dynav
