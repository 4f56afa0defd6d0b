#pragma once

#include "dynav/nn/params.hpp"
#include "dynav/ppo/gae.hpp"
#include "dynav/ppo/loss.hpp"
#include "dynav/ppo/rollout.hpp"

namespace dynav {

struct PpoConfig {
  int num_envs = 5;
  int n_steps = 150;
  int epochs = 4;
  int minibatches = 1;
  double lr = 2.5e-4;
  double gamma = 0.99;
  double tau = 0.95;
  PpoCoefficients coef;
  double max_grad_norm = 0.5;
  bool linear_lr_decay = true;
  bool linear_clip_decay = true;
  bool normalize_advantages = true;
  double aux_weight = 0.0;
  nn::AdamConfig adam;
};

/// Linear decay factor 1 - update / total_updates, floored at 0.
double linear_decay(int update, int total_updates);

struct UpdateStats {
  LossTerms loss;  // averaged over epochs
  double aux = 0.0;
  double grad_norm = 0.0;
};

/// Advantages and returns of every (env, step) slot, env-major.
AdvantageEstimate batch_advantages(const RolloutBatch& batch, double gamma, double tau);

/// Total objective and its parameter gradient on a batch for fixed
/// advantages and returns: the GRU is re-unrolled over each environment's
/// stored observations from its first recorded state, restarting at
/// episode starts, and gradients are reduced in environment order.
struct ObjectiveResult {
  LossTerms loss;
  double aux = 0.0;
  nn::GradBuffer grads;
};
ObjectiveResult ppo_objective(const PolicyNetwork& policy, const RolloutBatch& batch,
                              const std::vector<double>& advantages, const std::vector<double>& returns,
                              const PpoCoefficients& coef, double aux_weight);

/// `epochs` passes of objective, global-norm clipping and an Adam step,
/// with the given learning rate and clip parameter.
UpdateStats ppo_update(PolicyNetwork& policy, nn::Adam& adam, const RolloutBatch& batch, const PpoConfig& cfg,
                       double lr, double clip);

}  // namespace dynav
