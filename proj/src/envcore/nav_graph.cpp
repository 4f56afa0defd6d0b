#include "dynav/envcore/nav_graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace dynav {

namespace {
constexpr std::uint16_t kNoPath = std::numeric_limits<std::uint16_t>::max();

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }
}  // namespace

std::vector<int> bfs_distances(const GridMap& map, Cell source) {
  std::vector<int> dist(map.cell_count(), -1);
  if (map.blocked(source)) return dist;
  std::queue<Cell> q;
  dist[map.index(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop();
    const int d = dist[map.index(c)];
    for (const Heading h : kNeighborOrder) {
      const Cell n = c + offset(h);
      if (map.blocked(n) || dist[map.index(n)] != -1) continue;
      dist[map.index(n)] = d + 1;
      q.push(n);
    }
  }
  return dist;
}

NavGraph::NavGraph(GridMap map) : map_(std::move(map)) {
  free_index_.assign(map_.cell_count(), -1);
  free_cells_ = map_.free_cells();
  if (free_cells_.size() >= kNoPath) throw std::invalid_argument("NavGraph: map too large");
  for (std::size_t i = 0; i < free_cells_.size(); ++i) {
    free_index_[map_.index(free_cells_[i])] = static_cast<int>(i);
  }
  const std::size_t n = free_cells_.size();
  dist_.assign(n * n, kNoPath);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = bfs_distances(map_, free_cells_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const int v = d[map_.index(free_cells_[j])];
      if (v >= 0) dist_[i * n + j] = static_cast<std::uint16_t>(v);
    }
  }
  const auto labels = component_labels(map_);
  int n_labels = 0;
  for (int l : labels) n_labels = std::max(n_labels, l + 1);
  components_.assign(n_labels, {});
  component_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int l = labels[map_.index(free_cells_[i])];
    component_[i] = l;
    components_[l].push_back(free_cells_[i]);
  }
  for (int l = 0; l < n_labels; ++l) {
    if (components_[l].size() > components_[largest_].size()) largest_ = l;
  }
}

int NavGraph::free_index(Cell c) const {
  if (map_.blocked(c)) throw std::invalid_argument("blocked cell " + cell_str(c));
  return free_index_[map_.index(c)];
}

std::optional<int> NavGraph::distance(Cell a, Cell b) const {
  const int ia = free_index(a);
  const int ib = free_index(b);
  const std::uint16_t d = dist_[static_cast<std::size_t>(ia) * free_cells_.size() + ib];
  if (d == kNoPath) return std::nullopt;
  return static_cast<int>(d);
}

std::vector<Heading> NavGraph::optimal_first_moves(Cell from, Cell to) const {
  std::vector<Heading> out;
  const auto d = distance(from, to);
  if (!d || *d == 0) return out;
  for (const Heading h : kNeighborOrder) {
    const Cell n = from + offset(h);
    if (map_.blocked(n)) continue;
    const auto dn = distance(n, to);
    if (dn && *dn == *d - 1) out.push_back(h);
  }
  return out;
}

std::vector<Cell> NavGraph::shortest_path(Cell a, Cell b) const {
  const auto d = distance(a, b);
  if (!d) throw std::runtime_error("shortest_path: " + cell_str(a) + " cannot reach " + cell_str(b));
  std::vector<Cell> path{a};
  path.reserve(*d + 1);
  Cell c = a;
  while (c != b) {
    c = c + offset(optimal_first_moves(c, b).front());
    path.push_back(c);
  }
  return path;
}

const std::vector<Cell>& NavGraph::component_of(Cell c) const {
  return components_[component_[free_index(c)]];
}

std::optional<int> geodesic_distance(const NavGraph& graph, Cell a, Cell b) {
  return graph.distance(a, b);
}

std::vector<Cell> shortest_path(const NavGraph& graph, Cell a, Cell b) {
  return graph.shortest_path(a, b);
}

}  // namespace dynav
