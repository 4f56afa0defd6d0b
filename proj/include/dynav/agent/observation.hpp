#pragma once

#include <cstdint>

#include "dynav/acoustics/spectrogram.hpp"
#include "dynav/agent/profile.hpp"
#include "dynav/envcore/sensing.hpp"
#include "dynav/nn/tensor.hpp"

namespace dynav {

/// Everything the agent perceives at one environment step.
struct Observation {
  BinauralSpectrogram spectrogram{SpectrogramShape{1, 1}};
  DepthScan depth;
  GeometricMap gmap{1, 1};
  AgentPose pose;
  std::int64_t step = 0;
};

/// Network-ready tensors: spectrogram (2,F,T), depth (1,1,R) scaled to
/// [0,1] by the scan range, map view (2,H,W).
struct PolicyInput {
  nn::Tensor spectrogram;
  nn::Tensor depth;
  nn::Tensor view;
};

nn::Tensor spectrogram_tensor(const BinauralSpectrogram& spec);
nn::Tensor depth_tensor(const DepthScan& scan);

/// Map cell shown at view position (row, col). The agent sits at
/// (h/2, w/2) facing up; column offsets run to the agent's right.
Cell egocentric_cell(AgentPose pose, int row, int col, int view_h, int view_w);

/// Occupied/explored channels resampled into the agent frame. Cells off
/// the map read as occupied and explored.
nn::Tensor egocentric_view(const GeometricMap& gmap, AgentPose pose, int view_h, int view_w);

PolicyInput make_policy_input(const Observation& obs, const NetworkProfile& profile);

}  // namespace dynav
