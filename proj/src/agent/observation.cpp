#include "dynav/agent/observation.hpp"

#include <stdexcept>

namespace dynav {

nn::Tensor spectrogram_tensor(const BinauralSpectrogram& spec) {
  const int F = spec.freq_bins(), T = spec.frames();
  nn::Tensor out({2, F, T});
  for (int c = 0; c < 2; ++c) {
    for (int f = 0; f < F; ++f) {
      for (int t = 0; t < T; ++t) out.at(c, f, t) = spec.at(f, t, c);
    }
  }
  return out;
}

nn::Tensor depth_tensor(const DepthScan& scan) {
  if (scan.max_range <= 0.0) throw std::invalid_argument("depth_tensor: scan has no range");
  nn::Tensor out({1, 1, static_cast<int>(scan.size())});
  for (std::size_t i = 0; i < scan.size(); ++i) out[i] = scan.distances[i] / scan.max_range;
  return out;
}

Cell egocentric_cell(AgentPose pose, int row, int col, int view_h, int view_w) {
  const Cell fwd = offset(pose.heading);
  const Cell right = offset(rotate_right(pose.heading));
  const int ahead = view_h / 2 - row;
  const int side = col - view_w / 2;
  return {pose.cell.x + ahead * fwd.x + side * right.x, pose.cell.y + ahead * fwd.y + side * right.y};
}

nn::Tensor egocentric_view(const GeometricMap& gmap, AgentPose pose, int view_h, int view_w) {
  nn::Tensor out({2, view_h, view_w});
  for (int r = 0; r < view_h; ++r) {
    for (int c = 0; c < view_w; ++c) {
      const Cell m = egocentric_cell(pose, r, c, view_h, view_w);
      const bool inside = m.x >= 0 && m.y >= 0 && m.x < gmap.width() && m.y < gmap.height();
      out.at(0, r, c) = !inside || gmap.occupied(m) ? 1.0 : 0.0;
      out.at(1, r, c) = !inside || gmap.explored(m) ? 1.0 : 0.0;
    }
  }
  return out;
}

PolicyInput make_policy_input(const Observation& obs, const NetworkProfile& profile) {
  const auto expected = profile.spectrogram();
  if (obs.spectrogram.freq_bins() != expected.freq_bins || obs.spectrogram.frames() != expected.frames) {
    throw std::invalid_argument("observation spectrogram does not match profile " + profile.name);
  }
  if (static_cast<int>(obs.depth.size()) != profile.n_rays) {
    throw std::invalid_argument("observation depth scan does not match profile " + profile.name);
  }
  return {spectrogram_tensor(obs.spectrogram), depth_tensor(obs.depth),
          egocentric_view(obs.gmap, obs.pose, profile.view_h, profile.view_w)};
}

}  // namespace dynav
