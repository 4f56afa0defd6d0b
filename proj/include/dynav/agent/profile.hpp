#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dynav/acoustics/spectrogram.hpp"
#include "dynav/nn/modules.hpp"

namespace dynav {

/// Layer layout of every encoder, bound to a sample rate (which fixes the
/// spectrogram shape) and to the map view size the fusion stack sees.
struct NetworkProfile {
  std::string name;
  int sample_rate = 16000;
  int view_h = 8;
  int view_w = 8;
  int n_rays = 64;
  int action_map_size = 3;

  std::vector<nn::ConvSpec> audio_convs;
  int audio_features = 64;
  /// Ends with two channels; the result is resized to (view_h, view_w).
  std::vector<nn::ConvSpec> spatial_convs;
  std::vector<nn::ConvSpec> fusion_convs;
  int fusion_features = 64;
  std::vector<nn::ConvSpec> depth_convs;
  int depth_features = 64;
  int hidden_size = 64;

  /// Spectrogram reconstruction head hanging off the audio features.
  bool aux_decoder = false;

  SpectrogramShape spectrogram() const;
  int gru_input_size() const { return audio_features + fusion_features + depth_features; }
  int action_count() const { return action_map_size * action_map_size; }
};

/// Names: desk16k, desk44k (trainable), replica44k, mp3d16k (full-scale widths,
/// intended for shape checks). The view defaults to 8 x 8.
NetworkProfile make_profile(std::string_view name);
NetworkProfile make_profile(std::string_view name, int view_h, int view_w, int action_map_size);
std::vector<std::string> profile_names();

/// Per-layer (C, H, W) outputs of each encoder, from shape arithmetic alone.
struct ProfileShapes {
  std::vector<std::vector<int>> audio;
  std::vector<std::vector<int>> spatial;  // before the final resize
  std::vector<std::vector<int>> fusion;
  std::vector<std::vector<int>> depth;
  std::vector<std::vector<int>> decoder;  // before the final resize
};

/// Throws std::invalid_argument when a layer does not fit its input.
ProfileShapes profile_shapes(const NetworkProfile& profile);

/// Mirror of the audio encoder used by the reconstruction head.
std::vector<nn::ConvSpec> decoder_convs(const NetworkProfile& profile);

}  // namespace dynav
