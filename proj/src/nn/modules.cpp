#include "dynav/nn/modules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynav::nn {

ConvStack::ConvStack(ParamStore& store, const std::string& prefix, int in_channels,
                     std::vector<ConvSpec> specs, Rng& rng, bool final_relu)
    : specs_(std::move(specs)), in_channels_(in_channels), final_relu_(final_relu) {
  int c = in_channels;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    const std::string base = prefix + "." + std::to_string(i);
    const std::vector<int> shape = s.transposed ? std::vector<int>{c, s.out_channels, s.kh, s.kw}
                                                : std::vector<int>{s.out_channels, c, s.kh, s.kw};
    weights_.push_back(store.size());
    // Fan-in of a transposed layer counts the kernels overlapping one output.
    const int fan_in = s.transposed ? c * std::max(1, (s.kh / s.sh) * (s.kw / s.sw)) : c * s.kh * s.kw;
    init_uniform(store.add(base + ".w", shape), fan_in, rng, relu_after(i) ? std::sqrt(2.0) : 1.0);
    biases_.push_back(store.size());
    store.add(base + ".b", {s.out_channels});
    c = s.out_channels;
  }
}

std::vector<std::vector<int>> ConvStack::layer_shapes(std::vector<int> in) const {
  if (in.size() != 3 || in[0] != in_channels_) throw std::invalid_argument("conv stack: input shape " + shape_string(in));
  std::vector<std::vector<int>> out;
  for (const auto& s : specs_) {
    if (s.transposed) {
      in = {s.out_channels, tconv_out_size(in[1], s.kh, s.sh), tconv_out_size(in[2], s.kw, s.sw)};
    } else {
      in = {s.out_channels, conv_out_size(in[1], s.kh, s.sh), conv_out_size(in[2], s.kw, s.sw)};
    }
    out.push_back(in);
  }
  if (out.empty()) out.push_back(in);
  return out;
}

Tensor ConvStack::forward(const ParamStore& store, const Tensor& x, StackCache* cache) const {
  Tensor h = x;
  if (cache) {
    cache->inputs.clear();
    cache->preacts.clear();
  }
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    const Stride st{s.sh, s.sw};
    Tensor pre = s.transposed ? tconv2d_forward(h, store.value(weights_[i]), store.value(biases_[i]), st)
                              : conv2d_forward(h, store.value(weights_[i]), store.value(biases_[i]), st);
    if (cache) {
      cache->inputs.push_back(std::move(h));
      cache->preacts.push_back(pre);
    }
    h = relu_after(i) ? relu_forward(pre) : std::move(pre);
  }
  return h;
}

Tensor ConvStack::backward(const ParamStore& store, const StackCache& cache, const Tensor& grad_out,
                           GradBuffer& grads) const {
  Tensor g = grad_out;
  for (std::size_t k = specs_.size(); k-- > 0;) {
    const auto& s = specs_[k];
    if (relu_after(k)) g = relu_backward(g, cache.preacts[k]);
    const Stride st{s.sh, s.sw};
    auto lg = s.transposed ? tconv2d_backward(g, cache.inputs[k], store.value(weights_[k]), st, true)
                           : conv2d_backward(g, cache.inputs[k], store.value(weights_[k]), st, true);
    grads[weights_[k]].add(lg.weight);
    grads[biases_[k]].add(lg.bias);
    g = std::move(lg.input);
  }
  return g;
}

Dense::Dense(ParamStore& store, const std::string& prefix, int in, int out, bool relu, Rng& rng,
             double gain)
    : in_(in), out_(out), relu_(relu) {
  weight_ = store.size();
  init_uniform(store.add(prefix + ".w", {out, in}), in, rng, gain);
  bias_ = store.size();
  store.add(prefix + ".b", {out});
}

Tensor Dense::forward(const ParamStore& store, const Tensor& x, StackCache* cache) const {
  const Tensor flat = x.ndim() == 1 ? x : x.reshaped({static_cast<int>(x.size())});
  Tensor pre = linear_forward(flat, store.value(weight_), store.value(bias_));
  if (cache) {
    cache->inputs = {flat};
    cache->preacts = {pre};
  }
  return relu_ ? relu_forward(pre) : pre;
}

Tensor Dense::backward(const ParamStore& store, const StackCache& cache, const Tensor& grad_out,
                       GradBuffer& grads) const {
  const Tensor g = relu_ ? relu_backward(grad_out, cache.preacts[0]) : grad_out;
  auto lg = linear_backward(g, cache.inputs[0], store.value(weight_), true);
  grads[weight_].add(lg.weight);
  grads[bias_].add(lg.bias);
  return lg.input;
}

}  // namespace dynav::nn
