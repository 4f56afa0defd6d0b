#include "dynav/envcore/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dynav {

namespace {
constexpr double kTieTolerance = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void walk_ray(Cell origin, double angle_deg, const std::function<bool(Cell, double)>& visit) {
  const double rad = angle_deg * std::numbers::pi / 180.0;
  double dx = std::cos(rad);
  double dy = -std::sin(rad);  // rows grow southwards
  if (std::abs(dx) < 1e-12) dx = 0.0;
  if (std::abs(dy) < 1e-12) dy = 0.0;

  Cell c = origin;
  if (!visit(c, 0.0)) return;
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  // The ray starts at the cell centre, half a cell from each boundary.
  const double delta_x = step_x != 0 ? 1.0 / std::abs(dx) : kInf;
  const double delta_y = step_y != 0 ? 1.0 / std::abs(dy) : kInf;
  double t_max_x = step_x != 0 ? 0.5 * delta_x : kInf;
  double t_max_y = step_y != 0 ? 0.5 * delta_y : kInf;

  while (true) {
    double t = 0.0;
    if (step_x != 0 && step_y != 0 &&
        std::abs(t_max_x - t_max_y) <= kTieTolerance * std::max(1.0, t_max_x)) {
      t = t_max_x;
      c.x += step_x;
      c.y += step_y;
      t_max_x += delta_x;
      t_max_y += delta_y;
    } else if (t_max_x < t_max_y) {
      t = t_max_x;
      c.x += step_x;
      t_max_x += delta_x;
    } else {
      t = t_max_y;
      c.y += step_y;
      t_max_y += delta_y;
    }
    if (!visit(c, t)) return;
  }
}

DepthScan ray_cast_scan(const GridMap& map, AgentPose pose, int n_rays, double fov_degrees,
                        double max_range) {
  if (n_rays < 1) throw std::invalid_argument("ray_cast_scan: n_rays must be >= 1");
  if (!(max_range > 0.0)) throw std::invalid_argument("ray_cast_scan: max_range must be positive");
  DepthScan scan;
  scan.max_range = max_range;
  scan.angles_deg.resize(n_rays);
  scan.distances.resize(n_rays);
  scan.hit.resize(n_rays);
  const double heading = degrees(pose.heading);
  for (int i = 0; i < n_rays; ++i) {
    const double angle =
        n_rays == 1 ? heading : heading - fov_degrees / 2.0 + i * fov_degrees / (n_rays - 1);
    scan.angles_deg[i] = angle;
    double distance = max_range;
    std::uint8_t hit = 0;
    walk_ray(pose.cell, angle, [&](Cell c, double t) {
      if (t == 0.0) return true;
      if (t + 0.5 > max_range) return false;
      if (map.blocked(c)) {
        distance = t + 0.5;
        hit = 1;
        return false;
      }
      return true;
    });
    scan.distances[i] = distance;
    scan.hit[i] = hit;
  }
  return scan;
}

GeometricMap::GeometricMap(int width, int height)
    : width_(width),
      height_(height),
      occupied_(static_cast<std::size_t>(width) * height, 0),
      explored_(static_cast<std::size_t>(width) * height, 0) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("GeometricMap: empty dimensions");
}

int GeometricMap::explored_count() const {
  return static_cast<int>(std::count(explored_.begin(), explored_.end(), std::uint8_t{1}));
}

int GeometricMap::occupied_count() const {
  return static_cast<int>(std::count(occupied_.begin(), occupied_.end(), std::uint8_t{1}));
}

void GeometricMap::mark_explored(Cell c) {
  if (in_bounds(c)) explored_[index(c)] = 1;
}

void GeometricMap::mark_occupied(Cell c) {
  if (!in_bounds(c)) return;
  explored_[index(c)] = 1;
  occupied_[index(c)] = 1;
}

void update_geometric_map(GeometricMap& gmap, AgentPose pose, const DepthScan& scan) {
  gmap.mark_explored(pose.cell);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double distance = scan.distances[i];
    const bool hit = scan.hit[i] != 0;
    walk_ray(pose.cell, scan.angles_deg[i], [&](Cell c, double t) {
      if (t == 0.0) return true;
      const double reach = t + 0.5;
      if (hit && std::abs(reach - distance) <= 1e-9) {
        gmap.mark_occupied(c);
        return false;
      }
      if (reach > distance + 1e-9) return false;
      gmap.mark_explored(c);
      return true;
    });
  }
}

}  // namespace dynav
