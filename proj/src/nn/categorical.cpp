#include "dynav/nn/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynav::nn {

Categorical categorical_head(const Tensor& logits, std::span<const std::uint8_t> mask) {
  const std::size_t n = logits.size();
  if (mask.size() != n) throw std::invalid_argument("categorical_head: mask size mismatch");
  Categorical d;
  d.mask.assign(mask.begin(), mask.end());
  std::vector<double> l(n);
  double peak = Categorical::kMaskedLogit;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    l[i] = mask[i] ? logits[i] : Categorical::kMaskedLogit;
    if (mask[i]) {
      peak = any ? std::max(peak, l[i]) : l[i];
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("categorical_head: every action is masked");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(l[i] - peak);
  const double log_z = peak + std::log(sum);
  d.probs.resize(n);
  d.log_probs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.log_probs[i] = l[i] - log_z;
    d.probs[i] = mask[i] ? std::exp(d.log_probs[i]) : 0.0;
    if (mask[i]) d.entropy -= d.probs[i] * d.log_probs[i];
  }
  return d;
}

int Categorical::argmax() const {
  int best = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (mask[i] && (best < 0 || probs[i] > probs[best])) best = static_cast<int>(i);
  }
  return best;
}

int Categorical::sample(double u) const {
  double acc = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!mask[i]) continue;
    acc += probs[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;  // rounding slack at the top end
}

Tensor categorical_backward(const Categorical& d, int action, double a, double b) {
  const std::size_t n = d.probs.size();
  Tensor g({static_cast<int>(n)});
  for (std::size_t i = 0; i < n; ++i) {
    if (!d.mask[i]) continue;
    const double p = d.probs[i];
    double v = -a * p;
    if (static_cast<int>(i) == action) v += a;
    v += b * (-p * (d.log_probs[i] + d.entropy));
    g[i] = v;
  }
  return g;
}

}  // namespace dynav::nn
