#include "dynav/acoustics/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynav {

PropagationResult propagate(const NavGraph& graph, Cell source, AgentPose listener) {
  PropagationResult out;
  out.geodesic_moves = graph.distance(listener.cell, source);
  if (!out.geodesic_moves) return out;  // inaudible

  const int d = *out.geodesic_moves;
  out.total_gain = 1.0 / (1.0 + d);
  double bearing = 0.0;
  double s = 0.0;
  if (d > 0) {
    // Sum of optimal first-move directions in the listener frame
    // (forward, left), rotated with exact quarter turns.
    int forward = 0, left = 0;
    const int turns = static_cast<int>(listener.heading);
    for (const Heading h : graph.optimal_first_moves(listener.cell, source)) {
      const Heading rel = heading_from_index(static_cast<int>(h) - turns);
      const Cell o = offset(rel);
      forward += o.x;
      left -= o.y;
    }
    if (forward != 0 || left != 0) {
      bearing = std::atan2(static_cast<double>(left), static_cast<double>(forward)) * 180.0 /
                std::numbers::pi;
      // sin taken from the integer vector so mirrored layouts (and the
      // directly-behind case) give exactly opposite values.
      s = left / std::hypot(static_cast<double>(left), static_cast<double>(forward));
    }
  }
  out.bearing_deg = bearing;
  out.gain_left = out.total_gain * std::sqrt((1.0 + s) / 2.0);
  out.gain_right = out.total_gain * std::sqrt((1.0 - s) / 2.0);
  return out;
}

StereoChunk render_binaural(std::span<const double> mono, const PropagationResult& prop,
                            int itd_samples) {
  StereoChunk out = StereoChunk::silence(mono.size());
  std::size_t delay_left = 0, delay_right = 0;
  if (itd_samples > 0) {
    const double s = std::sin(prop.bearing_deg * std::numbers::pi / 180.0);
    const auto shift = static_cast<std::size_t>(std::lround(itd_samples * std::abs(s)));
    (s > 0 ? delay_right : delay_left) = shift;
  }
  for (std::size_t i = 0; i < mono.size(); ++i) {
    if (i >= delay_left) out.left[i] = prop.gain_left * mono[i - delay_left];
    if (i >= delay_right) out.right[i] = prop.gain_right * mono[i - delay_right];
  }
  return out;
}

StereoChunk mix(std::span<const StereoChunk> chunks) {
  if (chunks.empty()) throw std::invalid_argument("mix: no chunks");
  const std::size_t n = chunks.front().size();
  for (const auto& c : chunks) {
    if (c.left.size() != n || c.right.size() != n) {
      throw std::invalid_argument("mix: chunk length mismatch");
    }
  }
  if (chunks.size() == 1) return chunks.front();
  // Terms are summed in sorted order so the result is bit-identical for
  // every ordering of the inputs.
  StereoChunk out = StereoChunk::silence(n);
  std::vector<double> terms(chunks.size());
  auto sum_sorted = [&terms]() {
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < chunks.size(); ++k) terms[k] = chunks[k].left[i];
    out.left[i] = sum_sorted();
    for (std::size_t k = 0; k < chunks.size(); ++k) terms[k] = chunks[k].right[i];
    out.right[i] = sum_sorted();
  }
  return out;
}

}  // namespace dynav
