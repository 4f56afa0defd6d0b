#include "dynav/agent/profile.hpp"

#include <stdexcept>

namespace dynav {

namespace {

using nn::ConvSpec;

ConvSpec conv(int c, int kh, int kw, int sh, int sw) { return {c, kh, kw, sh, sw, false}; }
ConvSpec tconv(int c, int kh, int kw, int sh, int sw) { return {c, kh, kw, sh, sw, true}; }

// The depth encoder is one-dimensional over the rays: kernels 8/4/3.
std::vector<ConvSpec> depth_stack(int c1, int c2, int c3) {
  return {conv(c1, 1, 8, 1, 4), conv(c2, 1, 4, 1, 2), conv(c3, 1, 3, 1, 1)};
}

NetworkProfile desk(int sample_rate) {
  NetworkProfile p;
  p.sample_rate = sample_rate;
  if (sample_rate == 16000) {
    p.name = "desk16k";
    p.audio_convs = {conv(8, 8, 8, 4, 4), conv(16, 3, 3, 2, 2), conv(16, 3, 2, 1, 1)};
    p.spatial_convs = {conv(4, 8, 4, 8, 3), tconv(2, 3, 3, 1, 1)};
  } else {
    p.name = "desk44k";
    p.audio_convs = {conv(8, 8, 8, 4, 4), conv(16, 3, 3, 2, 2), conv(16, 3, 3, 1, 1)};
    p.spatial_convs = {conv(4, 8, 8, 8, 8), tconv(2, 3, 3, 1, 1)};
  }
  p.fusion_convs = {conv(8, 3, 3, 1, 1), conv(8, 3, 3, 2, 2)};
  p.depth_convs = depth_stack(4, 8, 8);
  return p;
}

NetworkProfile full_scale(int sample_rate) {
  NetworkProfile p;
  p.sample_rate = sample_rate;
  p.view_h = p.view_w = 200;
  p.audio_features = p.fusion_features = p.depth_features = p.hidden_size = 512;
  if (sample_rate == 44100) {
    p.name = "replica44k";
    p.audio_convs = {conv(32, 8, 8, 4, 4), conv(64, 4, 4, 2, 2), conv(64, 3, 3, 1, 1)};
    p.spatial_convs = {tconv(2, 8, 8, 3, 3), tconv(2, 1, 13, 1, 1)};
  } else {
    p.name = "mp3d16k";
    p.audio_convs = {conv(32, 5, 5, 2, 2), conv(64, 3, 3, 2, 2), conv(64, 3, 3, 1, 1)};
    p.spatial_convs = {tconv(2, 5, 2, 3, 4), tconv(2, 4, 2, 1, 2), conv(2, 1, 5, 1, 1)};
  }
  p.fusion_convs = {conv(32, 8, 8, 4, 4), conv(64, 4, 4, 2, 2), conv(64, 3, 3, 1, 1)};
  p.depth_convs = depth_stack(32, 64, 64);
  return p;
}

std::vector<std::vector<int>> shapes_of(const std::vector<ConvSpec>& specs, std::vector<int> in) {
  std::vector<std::vector<int>> out;
  for (const auto& s : specs) {
    if (s.transposed) {
      in = {s.out_channels, nn::tconv_out_size(in[1], s.kh, s.sh), nn::tconv_out_size(in[2], s.kw, s.sw)};
    } else {
      in = {s.out_channels, nn::conv_out_size(in[1], s.kh, s.sh), nn::conv_out_size(in[2], s.kw, s.sw)};
    }
    out.push_back(in);
  }
  return out;
}

}  // namespace

SpectrogramShape NetworkProfile::spectrogram() const { return spectrogram_shape(static_cast<std::size_t>(sample_rate)); }

std::vector<std::string> profile_names() { return {"desk16k", "desk44k", "replica44k", "mp3d16k"}; }

NetworkProfile make_profile(std::string_view name) {
  if (name == "desk16k") return desk(16000);
  if (name == "desk44k") return desk(44100);
  if (name == "replica44k") return full_scale(44100);
  if (name == "mp3d16k") return full_scale(16000);
  throw std::invalid_argument("unknown network profile '" + std::string(name) + "'");
}

NetworkProfile make_profile(std::string_view name, int view_h, int view_w, int action_map_size) {
  auto p = make_profile(name);
  if (action_map_size < 3 || action_map_size % 2 == 0) {
    throw std::invalid_argument("action_map_size must be odd and at least 3");
  }
  p.view_h = view_h;
  p.view_w = view_w;
  p.action_map_size = action_map_size;
  return p;
}

std::vector<nn::ConvSpec> decoder_convs(const NetworkProfile& p) {
  // Reverse the audio stack layer by layer: each transposed layer restores
  // the channel count its conv counterpart consumed.
  std::vector<ConvSpec> out;
  for (std::size_t k = p.audio_convs.size(); k-- > 0;) {
    const auto& s = p.audio_convs[k];
    const int channels = k == 0 ? 2 : p.audio_convs[k - 1].out_channels;
    out.push_back(tconv(channels, s.kh, s.kw, s.sh, s.sw));
  }
  return out;
}

ProfileShapes profile_shapes(const NetworkProfile& p) {
  const auto spec = p.spectrogram();
  const std::vector<int> audio_in{2, spec.freq_bins, spec.frames};
  ProfileShapes s;
  s.audio = shapes_of(p.audio_convs, audio_in);
  s.spatial = shapes_of(p.spatial_convs, audio_in);
  if (s.spatial.empty() || s.spatial.back()[0] != 2) {
    throw std::invalid_argument("spatial audio stack must end with two channels");
  }
  s.fusion = shapes_of(p.fusion_convs, {4, p.view_h, p.view_w});
  s.depth = shapes_of(p.depth_convs, {1, 1, p.n_rays});
  s.decoder = shapes_of(decoder_convs(p), s.audio.back());
  return s;
}

}  // namespace dynav
