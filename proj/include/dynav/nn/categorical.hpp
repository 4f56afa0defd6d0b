#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynav/nn/tensor.hpp"

namespace dynav::nn {

/// Masked softmax distribution over logits. Masked entries get the logit
/// kMaskedLogit before normalisation and so probability exactly 0.
struct Categorical {
  static constexpr double kMaskedLogit = -1e9;

  std::vector<double> probs;
  std::vector<double> log_probs;  // kMaskedLogit-scale for masked entries
  std::vector<std::uint8_t> mask; // 1 = allowed
  double entropy = 0.0;

  double log_prob(int action) const { return log_probs[action]; }
  int argmax() const;
  /// Inverse-CDF draw from a uniform u in [0, 1).
  int sample(double u) const;
};

/// Throws std::invalid_argument when every entry is masked or sizes differ.
Categorical categorical_head(const Tensor& logits, std::span<const std::uint8_t> mask);

/// dL/dlogits for L = a * log_prob(action) + b * entropy; zero on masked
/// entries.
Tensor categorical_backward(const Categorical& dist, int action, double grad_log_prob,
                            double grad_entropy);

}  // namespace dynav::nn
