#include "dynav/ppo/rollout.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace dynav {

VecEnv::VecEnv(int num_envs, const EnvConfig& cfg, std::shared_ptr<const MapPool> maps,
               std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds, std::uint64_t episode_offset)
    : offset_(episode_offset) {
  if (num_envs < 1) throw std::invalid_argument("VecEnv: num_envs must be positive");
  for (int e = 0; e < num_envs; ++e) {
    envs_.emplace_back(cfg, maps, bank, seeds);
    rngs_.push_back(SeedStreams::rng(seeds.policy, static_cast<std::uint64_t>(e)));
  }
  hidden_.resize(num_envs);
  counters_.assign(num_envs, 0);
  fresh_.assign(num_envs, 1);
}

std::uint64_t VecEnv::episodes_started() const {
  std::uint64_t n = 0;
  for (auto c : counters_) n += c;
  return n;
}

void VecEnv::begin_episode(int e, const PolicyNetwork& policy) {
  const auto n = static_cast<std::uint64_t>(envs_.size());
  envs_[e].reset(offset_ + counters_[e]++ * n + static_cast<std::uint64_t>(e));
  hidden_[e] = policy.initial_state();
  fresh_[e] = 1;
}

void VecEnv::reset(const PolicyNetwork& policy) {
  for (int e = 0; e < size(); ++e) begin_episode(e, policy);
  started_ = true;
}

RolloutBatch collect_rollouts(VecEnv& v, const PolicyNetwork& policy, int n_steps, SelectMode mode) {
  if (n_steps < 1) throw std::invalid_argument("collect_rollouts: n_steps must be positive");
  if (!v.started()) v.reset(policy);
  const int n = v.size();
  RolloutBatch batch;
  batch.n_envs = n;
  batch.n_steps = n_steps;
  batch.steps.assign(n, {});
  batch.bootstrap.assign(n, 0.0);
  std::vector<std::vector<std::pair<int, EpisodeRecord>>> finished(n);
  std::vector<std::int64_t> low(n, 0);
  const auto& profile = policy.profile();

#pragma omp parallel for schedule(static, 1)
  for (int e = 0; e < n; ++e) {
    auto& env = v.envs_[e];
    auto& seq = batch.steps[e];
    seq.reserve(n_steps);
    for (int t = 0; t < n_steps; ++t) {
      Transition tr;
      tr.input = make_policy_input(env.observation(), profile);
      tr.mask = env.action_mask();
      tr.h_in = v.hidden_[e];
      tr.episode_start = v.fresh_[e] != 0;
      const auto out = policy.forward(tr.input, tr.h_in);
      const auto sel = select_waypoint(out.logits, tr.mask, v.rngs_[e], mode, env.geometry());
      tr.action = sel.index;
      tr.log_prob = sel.dist.log_prob(sel.index);
      tr.value = out.value;
      const auto res = env.step_waypoint(sel.index);
      tr.reward = res.reward;
      tr.sub_steps = res.sub_steps;
      tr.done = res.done;
      low[e] += res.sub_steps;
      v.hidden_[e] = out.h;
      v.fresh_[e] = 0;
      seq.push_back(std::move(tr));
      if (res.done) {
        finished[e].emplace_back(t, env.record());
        v.begin_episode(e, policy);
      }
    }
    const auto input = make_policy_input(env.observation(), profile);
    batch.bootstrap[e] = policy.forward(input, v.hidden_[e]).value;
  }

  std::vector<std::tuple<int, int, const EpisodeRecord*>> order;
  for (int e = 0; e < n; ++e) {
    batch.low_level_steps += low[e];
    for (const auto& [t, rec] : finished[e]) order.emplace_back(t, e, &rec);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (const auto& item : order) batch.finished.push_back(*std::get<2>(item));
  return batch;
}

}  // namespace dynav
