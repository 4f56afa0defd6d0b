#pragma once

#include <string>
#include <vector>

#include "dynav/common/rng.hpp"
#include "dynav/nn/layers.hpp"
#include "dynav/nn/params.hpp"

namespace dynav::nn {

struct ConvSpec {
  int out_channels = 1;
  int kh = 1, kw = 1;
  int sh = 1, sw = 1;
  bool transposed = false;
};

/// Intermediates of a layer stack: per-layer input and pre-activation.
struct StackCache {
  std::vector<Tensor> inputs;
  std::vector<Tensor> preacts;
};

/// Convolution / transposed-convolution layers, each followed by a ReLU
/// (the last one optionally linear).
/// Weights and biases live in a ParamStore under `<prefix>.<i>.w/b`.
class ConvStack {
 public:
  ConvStack() = default;
  ConvStack(ParamStore& store, const std::string& prefix, int in_channels,
            std::vector<ConvSpec> specs, Rng& rng, bool final_relu = true);

  Tensor forward(const ParamStore& store, const Tensor& x, StackCache* cache = nullptr) const;
  /// Accumulates parameter gradients into `grads`; returns dL/dx.
  Tensor backward(const ParamStore& store, const StackCache& cache, const Tensor& grad_out,
                  GradBuffer& grads) const;
  /// Shape after each layer for a (C,H,W) input; throws on misfit.
  std::vector<std::vector<int>> layer_shapes(std::vector<int> input) const;
  std::vector<int> output_shape(std::vector<int> input) const { return layer_shapes(std::move(input)).back(); }
  const std::vector<ConvSpec>& specs() const { return specs_; }

 private:
  std::vector<ConvSpec> specs_;
  std::vector<std::size_t> weights_;
  std::vector<std::size_t> biases_;
  int in_channels_ = 0;
  bool final_relu_ = true;

  bool relu_after(std::size_t i) const { return final_relu_ || i + 1 < specs_.size(); }
};

/// Affine layer with optional trailing ReLU.
class Dense {
 public:
  Dense() = default;
  Dense(ParamStore& store, const std::string& prefix, int in, int out, bool relu, Rng& rng,
        double gain);

  Tensor forward(const ParamStore& store, const Tensor& x, StackCache* cache = nullptr) const;
  Tensor backward(const ParamStore& store, const StackCache& cache, const Tensor& grad_out,
                  GradBuffer& grads) const;
  int in_size() const { return in_; }
  int out_size() const { return out_; }

 private:
  std::size_t weight_ = 0;
  std::size_t bias_ = 0;
  int in_ = 0;
  int out_ = 0;
  bool relu_ = false;
};

}  // namespace dynav::nn
