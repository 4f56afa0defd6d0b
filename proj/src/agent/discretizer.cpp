#include "dynav/agent/discretizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynav {

namespace {

// Signed whole steps from `from` to `to` along one axis, with the extra
// step when the remainder passes the threshold.
int snap_axis(double from, double to, double res, double threshold) {
  const double diff = std::abs(to - from);
  const double steps = std::floor(diff / res);
  const double mod = diff - steps * res;
  int n = static_cast<int>(steps) + (mod > threshold ? 1 : 0);
  return to >= from ? n : -n;
}

}  // namespace

DiscreteTarget discretize_continuous(double v, double omega, DiscretizerState& s, std::uint64_t episode_id,
                                     Cell current, double res, double frame_degrees,
                                     std::optional<double> threshold) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("discretize_continuous: v outside [0, 1]");
  if (!(omega >= -90.0 && omega <= 90.0)) throw std::invalid_argument("discretize_continuous: omega outside [-90, 90]");
  if (!(res > 0.0)) throw std::invalid_argument("discretize_continuous: resolution must be positive");
  const double thr = threshold.value_or(res / 2.0);

  const double cx = current.x * res, cy = -current.y * res;
  if (s.episode != episode_id || current != s.discretized) {
    s.episode = episode_id;
    s.discretized = current;
    s.x = cx;
    s.y = cy;
  }
  const double a = (frame_degrees + omega) * std::numbers::pi / 180.0;
  s.x += v * std::cos(a);
  s.y += v * std::sin(a);

  const int dx = snap_axis(cx, s.x, res, thr);
  const int dy = snap_axis(cy, s.y, res, thr);
  s.discretized = {current.x + dx, current.y - dy};
  return {s.discretized, dx == 0 && dy == 0};
}

}  // namespace dynav
