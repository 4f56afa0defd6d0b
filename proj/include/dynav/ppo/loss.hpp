#pragma once

#include <span>
#include <vector>

#include "dynav/nn/tensor.hpp"

namespace dynav {

struct PpoCoefficients {
  double clip = 0.1;
  double value = 0.5;
  double entropy = 0.02;
};

/// Clipped surrogate of one sample: min(r A, clip(r, 1-eps, 1+eps) A).
double clipped_surrogate(double ratio, double advantage, double clip);

/// d surrogate / d log_prob_new for one sample.
double clipped_surrogate_grad(double ratio, double advantage, double clip);

/// Per-sample inputs of the objective.
struct LossSample {
  double log_prob_new = 0.0;
  double log_prob_old = 0.0;
  double advantage = 0.0;
  double value_new = 0.0;
  double ret = 0.0;
  double entropy = 0.0;
};

struct LossTerms {
  double total = 0.0;
  double clip = 0.0;     // -mean surrogate
  double value = 0.0;    // mean squared error to the returns
  double entropy = 0.0;  // mean entropy
  double clip_fraction = 0.0;
};

/// Loss gradients of one sample, already divided by the batch size.
struct LossSampleGrad {
  double log_prob = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

/// total = clip + c1 * value - c2 * entropy, averaged over the samples.
LossTerms ppo_loss(std::span<const LossSample> samples, const PpoCoefficients& c,
                   std::vector<LossSampleGrad>* grads = nullptr);

/// Mean squared error between a reconstruction and its target.
double aux_reconstruction_loss(const nn::Tensor& reconstruction, const nn::Tensor& target,
                               nn::Tensor* grad = nullptr);

}  // namespace dynav
