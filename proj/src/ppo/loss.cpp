#include "dynav/ppo/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynav {

double clipped_surrogate(double ratio, double advantage, double clip) {
  return std::min(ratio * advantage, std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage);
}

double clipped_surrogate_grad(double ratio, double advantage, double clip) {
  // Gradient flows only through the unclipped branch when it is the minimum.
  const double unclipped = ratio * advantage;
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage;
  return unclipped <= clipped ? unclipped : 0.0;
}

LossTerms ppo_loss(std::span<const LossSample> samples, const PpoCoefficients& c,
                   std::vector<LossSampleGrad>* grads) {
  if (samples.empty()) throw std::invalid_argument("ppo_loss: empty batch");
  const double n = static_cast<double>(samples.size());
  LossTerms t;
  if (grads) grads->assign(samples.size(), {});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double ratio = std::exp(s.log_prob_new - s.log_prob_old);
    t.clip -= clipped_surrogate(ratio, s.advantage, c.clip);
    const double err = s.value_new - s.ret;
    t.value += err * err;
    t.entropy += s.entropy;
    t.clip_fraction += std::abs(ratio - 1.0) > c.clip ? 1.0 : 0.0;
    if (grads) {
      (*grads)[i] = {-clipped_surrogate_grad(ratio, s.advantage, c.clip) / n, c.value * 2.0 * err / n,
                     -c.entropy / n};
    }
  }
  t.clip /= n;
  t.value /= n;
  t.entropy /= n;
  t.clip_fraction /= n;
  t.total = t.clip + c.value * t.value - c.entropy * t.entropy;
  return t;
}

double aux_reconstruction_loss(const nn::Tensor& reconstruction, const nn::Tensor& target, nn::Tensor* grad) {
  if (reconstruction.shape() != target.shape()) throw std::invalid_argument("aux_reconstruction_loss: shape mismatch");
  const double n = static_cast<double>(target.size());
  double sum = 0.0;
  if (grad) *grad = nn::Tensor(target.shape());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = reconstruction[i] - target[i];
    sum += d * d;
    if (grad) (*grad)[i] = 2.0 * d / n;
  }
  return sum / n;
}

}  // namespace dynav
