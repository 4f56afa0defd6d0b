#pragma once

// Independent reference implementations used only by the test suites. They
// deliberately avoid the library's own search and sensing code paths.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "dynav/envcore/grid_map.hpp"

namespace oracle {

using dynav::Cell;
using dynav::GridMap;

// Explicit adjacency list over free cells.
struct Graph {
  std::vector<Cell> nodes;
  std::map<Cell, int> id;
  std::vector<std::vector<std::pair<int, double>>> adj;
};

inline Graph build_graph(const GridMap& map) {
  Graph g;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.is_free({x, y})) {
        g.id[{x, y}] = static_cast<int>(g.nodes.size());
        g.nodes.push_back({x, y});
      }
    }
  }
  g.adj.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Cell c = g.nodes[i];
    for (const Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
      const auto it = g.id.find(c + d);
      if (it != g.id.end()) g.adj[i].push_back({it->second, 1.0});
    }
  }
  return g;
}

// Dijkstra with a binary heap; returns infinity when unreachable.
inline double dijkstra(const Graph& g, Cell a, Cell b) {
  const int s = g.id.at(a);
  const int t = g.id.at(b);
  std::vector<double> dist(g.nodes.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s] = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == t) return d;
    for (const auto& [v, w] : g.adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
    }
  }
  return dist[t];
}

// Recursive-free flood fill counting cells reachable from `seed`.
inline std::set<Cell> flood_fill(const GridMap& map, Cell seed) {
  std::set<Cell> seen;
  std::vector<Cell> stack{seed};
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (map.blocked(c) || seen.count(c)) continue;
    seen.insert(c);
    stack.push_back({c.x + 1, c.y});
    stack.push_back({c.x - 1, c.y});
    stack.push_back({c.x, c.y + 1});
    stack.push_back({c.x, c.y - 1});
  }
  return seen;
}

// Dijkstra over the (cell, heading) state space with unit action costs.
// Headings are 0..3 counter-clockwise from east, north = row - 1.
inline int action_count(const GridMap& map, Cell start, int heading, Cell target) {
  const int dx[4] = {1, 0, -1, 0};
  const int dy[4] = {0, -1, 0, 1};
  std::map<std::pair<Cell, int>, int> dist;
  using Item = std::pair<int, std::pair<Cell, int>>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[{start, heading}] = 0;
  pq.push({0, {start, heading}});
  while (!pq.empty()) {
    const auto [d, s] = pq.top();
    pq.pop();
    if (dist[s] < d) continue;
    if (s.first == target) return d;
    std::vector<std::pair<Cell, int>> next = {{s.first, (s.second + 1) % 4},
                                               {s.first, (s.second + 3) % 4}};
    const Cell f{s.first.x + dx[s.second], s.first.y + dy[s.second]};
    if (map.is_free(f)) next.push_back({f, s.second});
    for (const auto& n : next) {
      const auto it = dist.find(n);
      if (it == dist.end() || d + 1 < it->second) {
        dist[n] = d + 1;
        pq.push({d + 1, n});
      }
    }
  }
  return -1;
}

// Fine-sampling ray march: cell hit by the first sample point inside a
// blocked cell, sampled at a small step from the cell centre.
inline double ray_distance(const GridMap& map, Cell origin, double angle_deg, double max_range,
                           double step = 1e-4) {
  const double rad = angle_deg * 3.14159265358979323846 / 180.0;
  const double dx = std::cos(rad);
  const double dy = -std::sin(rad);
  for (double t = step; t <= max_range + 1.0; t += step) {
    const double px = origin.x + 0.5 + t * dx;
    const double py = origin.y + 0.5 + t * dy;
    const Cell c{static_cast<int>(std::floor(px)), static_cast<int>(std::floor(py))};
    if (map.blocked(c)) return std::min(max_range, t + 0.5);
    if (t + 0.5 > max_range) return max_range;
  }
  return max_range;
}

}  // namespace oracle
