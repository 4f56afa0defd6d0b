#include "dynav/ppo/update.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynav {

double linear_decay(int update, int total_updates) {
  if (total_updates <= 0) return 1.0;
  return std::max(0.0, 1.0 - static_cast<double>(update) / static_cast<double>(total_updates));
}

AdvantageEstimate batch_advantages(const RolloutBatch& batch, double gamma, double tau) {
  AdvantageEstimate all;
  for (int e = 0; e < batch.n_envs; ++e) {
    std::vector<double> r, v;
    std::vector<std::uint8_t> d;
    for (const auto& tr : batch.steps[e]) {
      r.push_back(tr.reward);
      v.push_back(tr.value);
      d.push_back(tr.done ? 1 : 0);
    }
    const auto est = compute_gae(r, v, d, batch.bootstrap[e], gamma, tau);
    all.advantages.insert(all.advantages.end(), est.advantages.begin(), est.advantages.end());
    all.returns.insert(all.returns.end(), est.returns.begin(), est.returns.end());
  }
  return all;
}

ObjectiveResult ppo_objective(const PolicyNetwork& policy, const RolloutBatch& batch,
                              const std::vector<double>& advantages, const std::vector<double>& returns,
                              const PpoCoefficients& coef, double aux_weight) {
  const int n_envs = batch.n_envs;
  std::size_t total = 0;
  for (const auto& seq : batch.steps) total += seq.size();
  if (advantages.size() != total || returns.size() != total) throw std::invalid_argument("ppo_objective: size mismatch");
  const bool aux = aux_weight != 0.0 && policy.profile().aux_decoder;

  // Forward pass per environment.
  std::vector<std::vector<PolicyCache>> caches(n_envs);
  std::vector<std::vector<nn::Categorical>> dists(n_envs);
  std::vector<std::vector<PolicyOutput>> outs(n_envs);
  std::vector<LossSample> samples(total);
  std::vector<std::size_t> base(n_envs, 0);
  for (int e = 1; e < n_envs; ++e) base[e] = base[e - 1] + batch.steps[e - 1].size();

#pragma omp parallel for schedule(static, 1)
  for (int e = 0; e < n_envs; ++e) {
    const auto& seq = batch.steps[e];
    caches[e].resize(seq.size());
    dists[e].reserve(seq.size());
    outs[e].reserve(seq.size());
    nn::Tensor h;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const auto& tr = seq[t];
      if (t == 0 || tr.episode_start) h = tr.h_in;
      auto out = policy.forward(tr.input, h, &caches[e][t]);
      dists[e].push_back(nn::categorical_head(out.logits, tr.mask));
      const std::size_t i = base[e] + t;
      samples[i] = {dists[e].back().log_prob(tr.action), tr.log_prob, advantages[i], out.value, returns[i],
                    dists[e].back().entropy};
      h = out.h;
      outs[e].push_back(std::move(out));
    }
  }

  ObjectiveResult res;
  std::vector<LossSampleGrad> g;
  res.loss = ppo_loss(samples, coef, &g);

  // Backward through time per environment, then an ordered reduction.
  std::vector<nn::GradBuffer> env_grads(n_envs);
  std::vector<double> env_aux(n_envs, 0.0);
#pragma omp parallel for schedule(static, 1)
  for (int e = 0; e < n_envs; ++e) {
    const auto& seq = batch.steps[e];
    env_grads[e] = policy.params().zeros_like();
    nn::Tensor g_h({policy.profile().hidden_size});
    for (std::size_t t = seq.size(); t-- > 0;) {
      const std::size_t i = base[e] + t;
      PolicyOutputGrads og;
      og.logits = nn::categorical_backward(dists[e][t], seq[t].action, g[i].log_prob, g[i].entropy);
      og.value = g[i].value;
      og.h = g_h;
      if (aux) {
        nn::Tensor gr;
        env_aux[e] += aux_reconstruction_loss(outs[e][t].reconstruction, seq[t].input.spectrogram, &gr);
        gr.scale(aux_weight / static_cast<double>(total));
        og.reconstruction = std::move(gr);
      }
      auto g_prev = policy.backward(caches[e][t], og, env_grads[e]);
      // The state entering an episode start (or the first stored state) is
      // a constant, so no gradient crosses it.
      if (seq[t].episode_start) g_prev.fill(0.0);
      g_h = std::move(g_prev);
    }
  }
  res.grads = std::move(env_grads[0]);
  for (int e = 1; e < n_envs; ++e) nn::accumulate(res.grads, env_grads[e]);
  for (int e = 0; e < n_envs; ++e) res.aux += env_aux[e];
  res.aux /= static_cast<double>(total);
  if (aux) res.loss.total += aux_weight * res.aux;
  return res;
}

UpdateStats ppo_update(PolicyNetwork& policy, nn::Adam& adam, const RolloutBatch& batch, const PpoConfig& cfg,
                       double lr, double clip) {
  if (cfg.minibatches != 1) throw std::invalid_argument("ppo_update: only a single minibatch is supported");
  auto est = batch_advantages(batch, cfg.gamma, cfg.tau);
  if (cfg.normalize_advantages) normalize_advantages(est.advantages);
  auto coef = cfg.coef;
  coef.clip = clip;
  UpdateStats stats;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto res = ppo_objective(policy, batch, est.advantages, est.returns, coef, cfg.aux_weight);
    stats.grad_norm += nn::clip_global_norm(res.grads, cfg.max_grad_norm);
    adam.step(policy.params(), res.grads, lr);
    stats.loss.total += res.loss.total;
    stats.loss.clip += res.loss.clip;
    stats.loss.value += res.loss.value;
    stats.loss.entropy += res.loss.entropy;
    stats.loss.clip_fraction += res.loss.clip_fraction;
    stats.aux += res.aux;
  }
  const double k = cfg.epochs > 0 ? 1.0 / cfg.epochs : 0.0;
  stats.loss.total *= k;
  stats.loss.clip *= k;
  stats.loss.value *= k;
  stats.loss.entropy *= k;
  stats.loss.clip_fraction *= k;
  stats.aux *= k;
  stats.grad_norm *= k;
  return stats;
}

}  // namespace dynav
