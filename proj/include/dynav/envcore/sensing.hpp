#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dynav/envcore/grid_map.hpp"

namespace dynav {

/// Ray-cast range scan, the desk-scale stand-in for a depth image.
struct DepthScan {
  std::vector<double> angles_deg;  // absolute (map-frame) ray angles
  std::vector<double> distances;   // cells, in (0, max_range]
  std::vector<std::uint8_t> hit;   // 1 when the ray ended on a blocked cell
  double max_range = 0.0;

  std::size_t size() const { return distances.size(); }
};

/// Visits the cells a ray from the centre of `origin` passes through, in
/// order, with the ray parameter at which each is entered (0 for the origin
/// cell). Rays through a lattice corner step diagonally. The walk stops when
/// `visit` returns false.
void walk_ray(Cell origin, double angle_deg, const std::function<bool(Cell, double)>& visit);

/// Ray i is cast at heading - fov/2 + i * fov / (n_rays - 1) (the heading
/// itself for a single ray). A ray's distance is its entry parameter into
/// the first blocked cell plus one half, so a wall directly ahead reads 1.
DepthScan ray_cast_scan(const GridMap& map, AgentPose pose, int n_rays, double fov_degrees,
                        double max_range);

/// Allocentric two-channel map: occupied and explored flags per cell.
class GeometricMap {
 public:
  GeometricMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool occupied(Cell c) const { return occupied_[index(c)] != 0; }
  bool explored(Cell c) const { return explored_[index(c)] != 0; }
  int explored_count() const;
  int occupied_count() const;

  void mark_explored(Cell c);
  void mark_occupied(Cell c);

  const std::vector<std::uint8_t>& occupied_channel() const { return occupied_; }
  const std::vector<std::uint8_t>& explored_channel() const { return explored_; }

  bool operator==(const GeometricMap&) const = default;

 private:
  int index(Cell c) const { return c.y * width_ + c.x; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }

  int width_;
  int height_;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint8_t> explored_;
};

/// Marks every cell a ray traversed as explored and each terminal blocked
/// cell as occupied (and explored). Applying the same scan twice is a no-op.
void update_geometric_map(GeometricMap& gmap, AgentPose pose, const DepthScan& scan);

}  // namespace dynav
