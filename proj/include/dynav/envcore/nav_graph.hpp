#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynav/envcore/grid_map.hpp"

namespace dynav {

/// Neighbour expansion order used for every deterministic tie-break.
inline constexpr Heading kNeighborOrder[4] = {Heading::North, Heading::East, Heading::South,
                                              Heading::West};

/// Unit-cost BFS distances from `source` to every cell (-1 = unreachable).
std::vector<int> bfs_distances(const GridMap& map, Cell source);

/// Traversability graph over a GridMap with a precomputed all-pairs
/// distance table. Immutable after construction; safe to share between
/// threads.
class NavGraph {
 public:
  explicit NavGraph(GridMap map);

  const GridMap& map() const { return map_; }

  /// Shortest 4-connected move count; nullopt when no path exists.
  /// Throws std::invalid_argument if either endpoint is blocked.
  std::optional<int> distance(Cell a, Cell b) const;
  bool connected(Cell a, Cell b) const { return distance(a, b).has_value(); }

  /// Cells from a to b inclusive; ties broken in N, E, S, W order.
  /// Throws std::runtime_error when unreachable.
  std::vector<Cell> shortest_path(Cell a, Cell b) const;

  /// Neighbours of `from` lying on at least one shortest path to `to`, in
  /// N, E, S, W order. Empty when from == to or unreachable.
  std::vector<Heading> optimal_first_moves(Cell from, Cell to) const;

  /// Free cells in the same 4-connected component as `c` (row-major).
  const std::vector<Cell>& component_of(Cell c) const;
  const std::vector<Cell>& largest_component() const { return components_[largest_]; }

 private:
  int free_index(Cell c) const;

  GridMap map_;
  std::vector<int> free_index_;            // per map cell, -1 if blocked
  std::vector<Cell> free_cells_;
  std::vector<std::uint16_t> dist_;        // free x free, kNoPath when unreachable
  std::vector<int> component_;             // per free cell
  std::vector<std::vector<Cell>> components_;
  int largest_ = 0;
};

/// Free-function forms of the navigation queries.
std::optional<int> geodesic_distance(const NavGraph& graph, Cell a, Cell b);
std::vector<Cell> shortest_path(const NavGraph& graph, Cell a, Cell b);

}  // namespace dynav
