#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dynav/acoustics/sound_bank.hpp"
#include "dynav/envcore/nav_graph.hpp"

namespace dynav {

struct StereoChunk {
  std::vector<double> left;
  std::vector<double> right;

  std::size_t size() const { return left.size(); }
  static StereoChunk silence(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

/// Interaural level split of a source as heard by a listener.
struct PropagationResult {
  double total_gain = 0.0;
  double gain_left = 0.0;
  double gain_right = 0.0;
  double bearing_deg = 0.0;           // relative to heading, counter-clockwise
  std::optional<int> geodesic_moves;  // nullopt when unreachable (inaudible)
};

/// Attenuation g = 1 / (1 + geodesic distance). The bearing is the
/// direction of the listener's first move towards the source, averaged over
/// all optimal first moves so mirrored layouts give mirrored bearings.
/// Gains: left = g * sqrt((1 + sin b) / 2), right = g * sqrt((1 - sin b) / 2).
PropagationResult propagate(const NavGraph& graph, Cell source, AgentPose listener);

/// Scales the mono signal per ear. A positive `itd_samples` additionally
/// delays the far ear by round(itd_samples * |sin bearing|) samples.
StereoChunk render_binaural(std::span<const double> mono, const PropagationResult& prop,
                            int itd_samples = 0);

/// Elementwise sum. Throws std::invalid_argument on empty input or
/// mismatched lengths.
StereoChunk mix(std::span<const StereoChunk> chunks);

}  // namespace dynav
