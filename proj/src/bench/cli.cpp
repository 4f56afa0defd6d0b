#include "dynav/bench/cli.hpp"

#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "dynav/bench/replay.hpp"
#include "dynav/bench/runner.hpp"
#include "dynav/bench/throughput.hpp"
#include "dynav/bench/trajectory_log.hpp"

namespace dynav {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string checkpoint;
  std::optional<std::string> task, scenario, sounds;
  std::optional<int> num_envs;
  std::string log;
  std::optional<std::uint64_t> episode;
  std::string svg;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.seed) cfg.set("seed", std::to_string(*f.seed));
  if (f.out) cfg.set("out", *f.out);
  if (f.task) cfg.set("task", *f.task);
  if (f.scenario) cfg.set("scenario", *f.scenario);
  if (f.sounds) cfg.set("sounds", *f.sounds);
  if (f.num_envs) cfg.set("num_envs", std::to_string(*f.num_envs));
  cfg.validate();
  return cfg;
}

fs::path log_path(const Flags& f, const RunConfig& cfg) {
  return f.log.empty() ? fs::path(cfg.out) / "trajectories.jsonl" : fs::path(f.log);
}

fs::path checkpoint_path(const Flags& f, const RunConfig& cfg) {
  return f.checkpoint.empty() ? fs::path(cfg.out) / "checkpoint.bin" : fs::path(f.checkpoint);
}

int cmd_train(const Flags& f, std::ostream& out) {
  const auto ctx = make_context(resolve(f));
  const auto s = train_run(ctx, ctx.cfg.out, &out);
  out << "trained " << s.updates << " updates, " << s.low_level_steps << " low-level steps; checkpoint "
      << s.checkpoint.string() << '\n';
  return kExitOk;
}

int cmd_eval(const Flags& f, std::ostream& out) {
  const auto cfg = resolve(f);
  if (!f.log.empty()) {
    // Metrics straight from an existing log.
    const auto records = read_trajectory_log(f.log);
    out << report_table({{"log", compute_report(records)}});
    return kExitOk;
  }
  const auto ctx = make_context(cfg);
  const auto policy = load_policy(ctx, checkpoint_path(f, cfg));
  const auto s = eval_run(ctx, policy, cfg.out);
  out << "task=" << to_string(cfg.task) << " scenario=" << to_string(cfg.scenario)
      << " sounds=" << to_string(cfg.sounds) << " mode=" << to_string(cfg.eval_mode) << '\n';
  out << report_table({{"policy", s.report}, {"oracle", s.oracle}});
  return kExitOk;
}

int cmd_replay(const Flags& f, std::ostream& out) {
  const auto cfg = resolve(f);
  const auto records = read_trajectory_log(log_path(f, cfg));
  const EpisodeRecord* pick = &records.front();
  if (f.episode) {
    pick = nullptr;
    for (const auto& r : records) {
      if (r.episode_id == *f.episode) pick = &r;
    }
    if (!pick) throw std::runtime_error("episode " + std::to_string(*f.episode) + " not in the log");
  }
  const fs::path svg =
      f.svg.empty() ? fs::path(cfg.out) / ("episode_" + std::to_string(pick->episode_id) + ".svg") : fs::path(f.svg);
  if (svg.has_parent_path()) fs::create_directories(svg.parent_path());
  std::ofstream(svg, std::ios::binary) << render_replay_svg(*pick, cfg.max_steps);
  out << "wrote " << svg.string() << '\n';
  out << report_table({{"replay", compute_report(records)}});
  return kExitOk;
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  const auto cfg = resolve(f);
  const auto records = read_trajectory_log(log_path(f, cfg));
  const auto bank = SoundBank();
  const auto res = cross_check(records, env_config(cfg, bank).reward, cfg.max_steps);
  out << report_table({{"log", res.report}});
  out << "episodes checked: " << res.episodes << ", chaser success on logged trajectories: " << res.oracle_success
      << '\n';
  for (const auto& m : res.mismatches) out << "MISMATCH " << m << '\n';
  return res.ok() ? kExitOk : kExitOracleMismatch;
}

int cmd_dump(const Flags& f, std::ostream& out) {
  const auto ctx = make_context(resolve(f));
  NavEnv env(ctx.env, ctx.maps, ctx.bank, ctx.seeds);
  const auto& obs = env.reset(f.episode.value_or(0));
  const fs::path dir = ctx.cfg.out;
  fs::create_directories(dir);
  write_spectrogram_dump(obs.spectrogram, dir / "spectrogram.bin");
  write_spectrogram_pgm(obs.spectrogram, dir / "spectrogram.pgm");
  const auto shape = obs.spectrogram.shape();
  out << "spectrogram " << shape.freq_bins << " x " << shape.frames << " x 2 written to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_bench(const Flags& f, std::ostream& out) {
  const auto ctx = make_context(resolve(f));
  const auto policy =
      f.checkpoint.empty() ? PolicyNetwork(ctx.profile, ctx.seeds.init) : load_policy(ctx, f.checkpoint);
  ThroughputOptions opts;
  opts.num_envs = ctx.cfg.num_envs;
  opts.duration = ctx.cfg.bench_duration;
  opts.warmup = ctx.cfg.bench_warmup;
  const auto csv = throughput_csv(throughput_bench(ctx.env, ctx.maps, ctx.bank, ctx.seeds, policy, opts));
  fs::create_directories(ctx.cfg.out);
  std::ofstream(fs::path(ctx.cfg.out) / "throughput.csv", std::ios::binary) << csv;
  out << csv;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audio-goal navigation benchmark"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "key = value or JSON config file");
  app.add_option("--seed", f.seed, "run seed");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--checkpoint", f.checkpoint, "checkpoint file");
  app.add_option("--task", f.task, "static or dynamic")->check(CLI::IsMember({"static", "dynamic"}));
  app.add_option("--scenario", f.scenario, "clean or complex")->check(CLI::IsMember({"clean", "complex"}));
  app.add_option("--sounds", f.sounds, "heard or unheard")->check(CLI::IsMember({"heard", "unheard"}));
  app.add_option("--num-envs", f.num_envs, "parallel environments")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "run PPO and write checkpoints and stats");
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint, or summarise a log given with --log");
  auto* replay = app.add_subcommand("replay", "render one logged episode to SVG");
  auto* oracle = app.add_subcommand("oracle", "cross-check a trajectory log");
  auto* dump = app.add_subcommand("dump-spectrogram", "write the first observation's spectrogram");
  auto* bench = app.add_subcommand("bench", "environment and policy stepping rates");
  for (auto* sub : {eval, replay, oracle}) sub->add_option("--log", f.log, "trajectory log (JSON lines)");
  for (auto* sub : {replay, dump}) sub->add_option("--episode", f.episode, "episode id");
  replay->add_option("--svg", f.svg, "output SVG path");
  for (auto* sub : {train, eval, replay, oracle, dump, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*train) return cmd_train(f, out);
    if (*eval) return cmd_eval(f, out);
    if (*replay) return cmd_replay(f, out);
    if (*oracle) return cmd_oracle(f, out);
    if (*dump) return cmd_dump(f, out);
    if (*bench) return cmd_bench(f, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CheckpointError& e) {
    err << "checkpoint error: " << e.what() << '\n';
    return kExitCheckpoint;
  } catch (const EmptyLogError& e) {
    err << "empty log: " << e.what() << '\n';
    return kExitEmptyLog;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace dynav
