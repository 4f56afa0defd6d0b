#include "dynav/ppo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dynav {

namespace {

double episode_return(const EpisodeRecord& r) {
  double s = 0.0;
  for (const auto& step : r.steps) s += step.reward;
  return s;
}

}  // namespace

std::string stats_csv_header() {
  return "update,mean_return,success_rate,spl_or_dspl,loss_clip,loss_value,entropy,lr";
}

std::string stats_csv_row(const UpdateReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.update << ',' << r.mean_return << ',' << r.success_rate << ',' << r.spl_or_dspl << ',' << r.loss.clip
     << ',' << r.loss.value << ',' << r.loss.entropy << ',' << r.lr;
  return os.str();
}

Trainer::Trainer(PpoConfig cfg, const EnvConfig& env, std::shared_ptr<const MapPool> maps,
                 std::shared_ptr<const SoundBank> bank, NetworkProfile profile, const SeedStreams& seeds,
                 int total_updates, int stats_window)
    : cfg_(cfg),
      policy_(std::move(profile), seeds.init),
      adam_(policy_.params(), cfg.adam),
      envs_(cfg.num_envs, env, std::move(maps), std::move(bank), seeds),
      total_updates_(total_updates),
      window_size_(static_cast<std::size_t>(std::max(1, stats_window))) {
  if (total_updates < 1) throw std::invalid_argument("Trainer: total_updates must be positive");
  if (policy_.profile().action_map_size != env.action_map_size) {
    throw std::invalid_argument("Trainer: profile and environment disagree on the action map size");
  }
}

UpdateReport Trainer::train_update() {
  const double decay_lr = cfg_.linear_lr_decay ? linear_decay(updates_, total_updates_) : 1.0;
  const double decay_clip = cfg_.linear_clip_decay ? linear_decay(updates_, total_updates_) : 1.0;
  const double lr = cfg_.lr * decay_lr;
  const double clip = cfg_.coef.clip * decay_clip;

  last_batch_ = collect_rollouts(envs_, policy_, cfg_.n_steps);
  const auto stats = ppo_update(policy_, adam_, last_batch_, cfg_, lr, clip);
  low_level_steps_ += last_batch_.low_level_steps;
  for (const auto& rec : last_batch_.finished) {
    const auto terms = episode_terms(rec);
    window_.push_back({episode_return(rec), terms.success, rec.dynamic ? terms.dspl : terms.spl});
    if (window_.size() > window_size_) window_.pop_front();
    ++episodes_;
  }

  UpdateReport r;
  r.update = updates_++;
  if (window_.empty()) {
    r.mean_return = r.success_rate = r.spl_or_dspl = std::nan("");
  } else {
    for (const auto& w : window_) {
      r.mean_return += w.ret;
      r.success_rate += w.success;
      r.spl_or_dspl += w.weighted;
    }
    const double n = static_cast<double>(window_.size());
    r.mean_return /= n;
    r.success_rate /= n;
    r.spl_or_dspl /= n;
  }
  r.loss = stats.loss;
  r.lr = lr;
  r.clip = clip;
  r.low_level_steps = low_level_steps_;
  r.episodes = episodes_;
  return r;
}

LowLevelAction chaser_action(const NavEnv& env) {
  if (env.pose().cell == env.source_cell()) return LowLevelAction::Stop;
  const auto plan = plan_actions(env.graph().map(), env.pose(), env.source_cell());
  return plan.front();
}

namespace {

template <typename Play>
std::vector<EpisodeRecord> run_episodes(const EnvConfig& env_cfg, std::shared_ptr<const MapPool> maps,
                                        std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                        const EvalOptions& opts, Play play) {
  if (opts.episodes < 1) throw std::invalid_argument("evaluation needs at least one episode");
  const int n = std::max(1, std::min(opts.num_envs, opts.episodes));
  std::vector<std::vector<EpisodeRecord>> per_env(n);
#pragma omp parallel for schedule(static, 1)
  for (int e = 0; e < n; ++e) {
    NavEnv env(env_cfg, maps, bank, seeds);
    Rng rng = SeedStreams::rng(seeds.policy, static_cast<std::uint64_t>(e));
    for (int k = e; k < opts.episodes; k += n) {
      env.reset(opts.episode_offset + static_cast<std::uint64_t>(k));
      play(env, rng);
      per_env[e].push_back(env.record());
    }
  }
  std::vector<EpisodeRecord> out;
  for (auto& v : per_env) {
    for (auto& r : v) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const EpisodeRecord& a, const EpisodeRecord& b) { return a.episode_id < b.episode_id; });
  return out;
}

}  // namespace

std::vector<EpisodeRecord> evaluate_policy(const PolicyNetwork& policy, const EnvConfig& env_cfg,
                                           std::shared_ptr<const MapPool> maps,
                                           std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                           const EvalOptions& opts) {
  return run_episodes(env_cfg, std::move(maps), std::move(bank), seeds, opts, [&](NavEnv& env, Rng& rng) {
    auto h = policy.initial_state();
    while (!env.done()) {
      const auto out = policy.forward(make_policy_input(env.observation(), policy.profile()), h);
      const auto mask = env.action_mask();
      const auto sel = select_waypoint(out.logits, mask, rng, opts.mode, env.geometry());
      env.step_waypoint(sel.index);
      h = out.h;
    }
  });
}

std::vector<EpisodeRecord> evaluate_oracle(const EnvConfig& env_cfg, std::shared_ptr<const MapPool> maps,
                                           std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                           const EvalOptions& opts) {
  return run_episodes(env_cfg, std::move(maps), std::move(bank), seeds, opts, [](NavEnv& env, Rng&) {
    while (!env.done()) env.step_low_level(chaser_action(env));
  });
}

}  // namespace dynav
