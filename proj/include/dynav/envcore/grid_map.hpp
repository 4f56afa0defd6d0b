#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dynav {

struct Cell {
  int x = 0;  // column
  int y = 0;  // row, 0 at the top
  auto operator<=>(const Cell&) const = default;
};

/// Cardinal heading. Counter-clockwise quarter turns from east, so
/// degrees() == 90 * index; "north" is decreasing row index.
enum class Heading : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

constexpr int degrees(Heading h) { return 90 * static_cast<int>(h); }
constexpr Heading heading_from_index(int k) { return static_cast<Heading>(((k % 4) + 4) % 4); }
constexpr Heading rotate_left(Heading h) { return heading_from_index(static_cast<int>(h) + 1); }
constexpr Heading rotate_right(Heading h) { return heading_from_index(static_cast<int>(h) + 3); }

/// Unit displacement of one forward move along a heading.
constexpr Cell offset(Heading h) {
  switch (h) {
    case Heading::East: return {1, 0};
    case Heading::North: return {0, -1};
    case Heading::West: return {-1, 0};
    case Heading::South: return {0, 1};
  }
  return {0, 0};
}

constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
constexpr Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }

struct AgentPose {
  Cell cell;
  Heading heading = Heading::East;
  auto operator<=>(const AgentPose&) const = default;
};

enum class MapStyle { Open, Rooms, Maze };

MapStyle parse_map_style(std::string_view name);
std::string_view to_string(MapStyle style);

/// Immutable occupancy grid.
class GridMap {
 public:
  GridMap(int width, int height, std::vector<std::uint8_t> blocked, double resolution);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  int cell_count() const { return width_ * height_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  /// Out-of-bounds cells count as blocked.
  bool blocked(Cell c) const { return !in_bounds(c) || blocked_[index(c)] != 0; }
  bool is_free(Cell c) const { return !blocked(c); }

  int index(Cell c) const { return c.y * width_ + c.x; }
  Cell cell_at(int index) const { return {index % width_, index / width_}; }

  int free_count() const;
  std::vector<Cell> free_cells() const;

  /// '#'/'.' rows joined by '\n' (no header).
  std::string to_text() const;
  std::vector<std::string> rows() const;

  bool operator==(const GridMap&) const = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> blocked_;
  double resolution_;
};

/// Parses '#'/'.' rows. Throws std::invalid_argument on ragged rows,
/// unknown characters, or a map without free cells.
GridMap load_map(std::string_view text, double resolution = 0.5);

/// Map file: first line `resolution=<float>`, then the grid rows.
GridMap load_map_file(const std::filesystem::path& path);
std::string map_file_text(const GridMap& map);

/// Deterministic procedural map with a fully blocked border.
GridMap generate_map(std::uint64_t seed, int width, int height, MapStyle style,
                     double resolution = 0.5);

/// 4-connected component label per cell (-1 for blocked cells).
std::vector<int> component_labels(const GridMap& map);

/// Free cells of the largest 4-connected component, in row-major order.
std::vector<Cell> largest_component(const GridMap& map);

}  // namespace dynav
