#pragma once

#include <cstdint>
#include <vector>

#include "dynav/agent/observation.hpp"
#include "dynav/agent/profile.hpp"
#include "dynav/nn/gru.hpp"
#include "dynav/nn/modules.hpp"

namespace dynav {

struct PolicyOutput {
  nn::Tensor logits;          // K*K action-map logits, row-major
  double value = 0.0;
  nn::Tensor h;               // new recurrent state
  nn::Tensor reconstruction;  // (2,F,T) when the aux decoder is enabled
};

struct PolicyCache {
  nn::StackCache audio, audio_fc;
  nn::StackCache spatial;
  std::vector<int> spatial_shape;  // spatial stack output before resizing
  nn::StackCache fusion, fusion_fc;
  nn::StackCache depth, depth_fc;
  nn::GruCache gru;
  nn::StackCache actor, critic;
  nn::StackCache decoder_fc, decoder;
  std::vector<int> decoder_shape;
};

/// Loss gradients with respect to each forward output. An empty
/// reconstruction gradient means the aux branch contributes nothing.
struct PolicyOutputGrads {
  nn::Tensor logits;
  double value = 0.0;
  nn::Tensor h;
  nn::Tensor reconstruction;
};

/// Audio, spatial-audio, fusion and depth encoders feeding a GRU with
/// actor and critic heads. All weights live in one ParamStore so optimiser
/// and checkpoint code stay generic.
class PolicyNetwork {
 public:
  PolicyNetwork(NetworkProfile profile, std::uint64_t init_seed);

  const NetworkProfile& profile() const { return profile_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  nn::Tensor initial_state() const { return nn::Tensor({profile_.hidden_size}); }

  PolicyOutput forward(const PolicyInput& in, const nn::Tensor& h_prev, PolicyCache* cache = nullptr) const;
  /// Adds parameter gradients into `grads` and returns dL/dh_prev.
  nn::Tensor backward(const PolicyCache& cache, const PolicyOutputGrads& g, nn::GradBuffer& grads) const;

  nn::Tensor encode_audio(const nn::Tensor& spec, PolicyCache* cache = nullptr) const;
  nn::Tensor encode_spatial_audio(const nn::Tensor& spec, PolicyCache* cache = nullptr) const;
  nn::Tensor fuse_audio_visual(const nn::Tensor& spatial_audio, const nn::Tensor& view,
                               PolicyCache* cache = nullptr) const;
  nn::Tensor encode_depth(const nn::Tensor& depth, PolicyCache* cache = nullptr) const;
  nn::Tensor decode_audio(const nn::Tensor& features, PolicyCache* cache = nullptr) const;

 private:
  NetworkProfile profile_;
  nn::ParamStore params_;
  nn::ConvStack audio_;
  nn::Dense audio_fc_;
  nn::ConvStack spatial_;
  nn::ConvStack fusion_;
  nn::Dense fusion_fc_;
  nn::ConvStack depth_;
  nn::Dense depth_fc_;
  std::size_t gru_ = 0;  // index of W_r; the six GRU matrices are contiguous
  nn::Dense actor_;
  nn::Dense critic_;
  nn::Dense decoder_fc_;
  nn::ConvStack decoder_;

  nn::GruRefs gru_refs() const;
};

}  // namespace dynav
