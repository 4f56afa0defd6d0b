#include "dynav/agent/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace dynav {

namespace {

int flat_size(const std::vector<int>& shape) { return static_cast<int>(nn::element_count(shape)); }

}  // namespace

PolicyNetwork::PolicyNetwork(NetworkProfile profile, std::uint64_t init_seed) : profile_(std::move(profile)) {
  const auto shapes = profile_shapes(profile_);
  Rng rng(init_seed);
  const double relu_gain = std::sqrt(2.0);
  audio_ = nn::ConvStack(params_, "audio", 2, profile_.audio_convs, rng);
  audio_fc_ = nn::Dense(params_, "audio.fc", flat_size(shapes.audio.back()), profile_.audio_features, true, rng,
                        relu_gain);
  spatial_ = nn::ConvStack(params_, "spatial", 2, profile_.spatial_convs, rng);
  fusion_ = nn::ConvStack(params_, "fusion", 4, profile_.fusion_convs, rng);
  fusion_fc_ = nn::Dense(params_, "fusion.fc", flat_size(shapes.fusion.back()), profile_.fusion_features, true,
                         rng, relu_gain);
  depth_ = nn::ConvStack(params_, "depth", 1, profile_.depth_convs, rng);
  depth_fc_ = nn::Dense(params_, "depth.fc", flat_size(shapes.depth.back()), profile_.depth_features, true, rng,
                        relu_gain);

  const int in = profile_.gru_input_size(), H = profile_.hidden_size;
  gru_ = params_.size();
  for (const char* name : {"gru.W_r", "gru.U_r", "gru.W_z", "gru.U_z", "gru.W", "gru.U"}) {
    const bool input_side = name[4] == 'W';
    nn::init_uniform(params_.add(name, {H, input_side ? in : H}), input_side ? in : H, rng);
  }
  actor_ = nn::Dense(params_, "actor", H, profile_.action_count(), false, rng, 0.01);
  critic_ = nn::Dense(params_, "critic", H, 1, false, rng, 1.0);

  if (profile_.aux_decoder) {
    const auto& top = shapes.audio.back();
    decoder_fc_ = nn::Dense(params_, "decoder.fc", profile_.audio_features, flat_size(top), true, rng, relu_gain);
    decoder_ = nn::ConvStack(params_, "decoder", top[0], decoder_convs(profile_), rng, false);
  }
}

nn::GruRefs PolicyNetwork::gru_refs() const {
  return {params_.value(gru_), params_.value(gru_ + 1), params_.value(gru_ + 2),
          params_.value(gru_ + 3), params_.value(gru_ + 4), params_.value(gru_ + 5)};
}

nn::Tensor PolicyNetwork::encode_audio(const nn::Tensor& spec, PolicyCache* c) const {
  const auto h = audio_.forward(params_, spec, c ? &c->audio : nullptr);
  return audio_fc_.forward(params_, h, c ? &c->audio_fc : nullptr);
}

nn::Tensor PolicyNetwork::encode_spatial_audio(const nn::Tensor& spec, PolicyCache* c) const {
  const auto h = spatial_.forward(params_, spec, c ? &c->spatial : nullptr);
  if (c) c->spatial_shape = h.shape();
  return nn::resize_nearest(h, profile_.view_h, profile_.view_w);
}

nn::Tensor PolicyNetwork::fuse_audio_visual(const nn::Tensor& spatial_audio, const nn::Tensor& view,
                                            PolicyCache* c) const {
  if (spatial_audio.ndim() != 3 || view.ndim() != 3 || spatial_audio.dim(1) != view.dim(1) ||
      spatial_audio.dim(2) != view.dim(2)) {
    throw std::invalid_argument("fuse_audio_visual: spatial mismatch " + nn::shape_string(spatial_audio.shape()) +
                                " vs " + nn::shape_string(view.shape()));
  }
  const auto h = fusion_.forward(params_, nn::concat_channels(spatial_audio, view), c ? &c->fusion : nullptr);
  return fusion_fc_.forward(params_, h, c ? &c->fusion_fc : nullptr);
}

nn::Tensor PolicyNetwork::encode_depth(const nn::Tensor& depth, PolicyCache* c) const {
  const auto h = depth_.forward(params_, depth, c ? &c->depth : nullptr);
  return depth_fc_.forward(params_, h, c ? &c->depth_fc : nullptr);
}

nn::Tensor PolicyNetwork::decode_audio(const nn::Tensor& features, PolicyCache* c) const {
  if (!profile_.aux_decoder) throw std::logic_error("decode_audio: profile has no aux decoder");
  const auto top = profile_shapes(profile_).audio.back();
  const auto h = decoder_fc_.forward(params_, features, c ? &c->decoder_fc : nullptr).reshaped(top);
  const auto out = decoder_.forward(params_, h, c ? &c->decoder : nullptr);
  if (c) c->decoder_shape = out.shape();
  const auto spec = profile_.spectrogram();
  return nn::resize_nearest(out, spec.freq_bins, spec.frames);
}

PolicyOutput PolicyNetwork::forward(const PolicyInput& in, const nn::Tensor& h_prev, PolicyCache* c) const {
  const auto a = encode_audio(in.spectrogram, c);
  const auto f = fuse_audio_visual(encode_spatial_audio(in.spectrogram, c), in.view, c);
  const auto d = encode_depth(in.depth, c);
  const auto x = nn::concat_flat({&a, &f, &d});
  PolicyOutput out;
  out.h = nn::gru_cell(x, h_prev, gru_refs(), c ? &c->gru : nullptr);
  out.logits = actor_.forward(params_, out.h, c ? &c->actor : nullptr);
  out.value = critic_.forward(params_, out.h, c ? &c->critic : nullptr)[0];
  if (profile_.aux_decoder) out.reconstruction = decode_audio(a, c);
  return out;
}

nn::Tensor PolicyNetwork::backward(const PolicyCache& c, const PolicyOutputGrads& g, nn::GradBuffer& grads) const {
  if (grads.size() != params_.size()) throw std::invalid_argument("policy backward: gradient buffer size");
  nn::Tensor gh = g.h.size() ? g.h : nn::Tensor({profile_.hidden_size});
  if (g.logits.size()) gh.add(actor_.backward(params_, c.actor, g.logits, grads));
  if (g.value != 0.0) gh.add(critic_.backward(params_, c.critic, nn::Tensor({1}, {g.value}), grads));

  const auto gg = nn::gru_cell_backward(gh, c.gru, gru_refs());
  const nn::Tensor* gru_grads[6] = {&gg.params.W_r, &gg.params.U_r, &gg.params.W_z,
                                    &gg.params.U_z, &gg.params.W, &gg.params.U};
  for (std::size_t k = 0; k < 6; ++k) grads[gru_ + k].add(*gru_grads[k]);

  const int na = profile_.audio_features, nf = profile_.fusion_features, nd = profile_.depth_features;
  const auto slice = [&](int from, int n) {
    nn::Tensor t({n});
    for (int i = 0; i < n; ++i) t[i] = gg.x[from + i];
    return t;
  };
  nn::Tensor ga = slice(0, na);
  if (profile_.aux_decoder && g.reconstruction.size()) {
    const auto gr = nn::resize_nearest_backward(g.reconstruction, c.decoder_shape[1], c.decoder_shape[2]);
    const auto gtop = decoder_.backward(params_, c.decoder, gr, grads);
    ga.add(decoder_fc_.backward(params_, c.decoder_fc, gtop.reshaped({static_cast<int>(gtop.size())}), grads));
  }

  const auto g_audio_conv = audio_fc_.backward(params_, c.audio_fc, ga, grads);
  audio_.backward(params_, c.audio, g_audio_conv.reshaped(c.audio.preacts.back().shape()), grads);

  const auto g_fusion_conv = fusion_fc_.backward(params_, c.fusion_fc, slice(na, nf), grads);
  const auto g_concat = fusion_.backward(params_, c.fusion, g_fusion_conv.reshaped(c.fusion.preacts.back().shape()), grads);
  // Only the spatial-audio channels lead back to parameters.
  nn::Tensor g_spatial({2, profile_.view_h, profile_.view_w});
  for (std::size_t i = 0; i < g_spatial.size(); ++i) g_spatial[i] = g_concat[i];
  spatial_.backward(params_, c.spatial,
                    nn::resize_nearest_backward(g_spatial, c.spatial_shape[1], c.spatial_shape[2]), grads);

  const auto g_depth_conv = depth_fc_.backward(params_, c.depth_fc, slice(na + nf, nd), grads);
  depth_.backward(params_, c.depth, g_depth_conv.reshaped(c.depth.preacts.back().shape()), grads);
  return gg.h_prev;
}

}  // namespace dynav
