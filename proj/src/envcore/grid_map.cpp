#include "dynav/envcore/grid_map.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "dynav/common/rng.hpp"

namespace dynav {

MapStyle parse_map_style(std::string_view name) {
  if (name == "open") return MapStyle::Open;
  if (name == "rooms") return MapStyle::Rooms;
  if (name == "maze") return MapStyle::Maze;
  throw std::invalid_argument("unknown map style: " + std::string(name));
}

std::string_view to_string(MapStyle style) {
  switch (style) {
    case MapStyle::Open: return "open";
    case MapStyle::Rooms: return "rooms";
    case MapStyle::Maze: return "maze";
  }
  return "?";
}

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> blocked, double resolution)
    : width_(width), height_(height), blocked_(std::move(blocked)), resolution_(resolution) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("GridMap: empty dimensions");
  if (blocked_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("GridMap: occupancy size mismatch");
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("GridMap: resolution must be positive");
  if (free_count() == 0) throw std::invalid_argument("GridMap: no free cells");
}

int GridMap::free_count() const {
  return static_cast<int>(std::count(blocked_.begin(), blocked_.end(), std::uint8_t{0}));
}

std::vector<Cell> GridMap::free_cells() const {
  std::vector<Cell> out;
  for (int i = 0; i < cell_count(); ++i) {
    if (blocked_[i] == 0) out.push_back(cell_at(i));
  }
  return out;
}

std::vector<std::string> GridMap::rows() const {
  std::vector<std::string> out(height_, std::string(width_, '.'));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (blocked({x, y})) out[y][x] = '#';
    }
  }
  return out;
}

std::string GridMap::to_text() const {
  std::string text;
  for (const auto& row : rows()) {
    text += row;
    text += '\n';
  }
  return text;
}

GridMap load_map(std::string_view text, double resolution) {
  std::vector<std::string> rows;
  std::string current;
  for (char ch : text) {
    if (ch == '\r') continue;
    if (ch == '\n') {
      rows.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) rows.push_back(std::move(current));
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("load_map: empty map");

  const std::size_t width = rows.front().size();
  std::vector<std::uint8_t> blocked;
  blocked.reserve(width * rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw std::invalid_argument("load_map: ragged row " + std::to_string(r));
    }
    for (char ch : rows[r]) {
      if (ch == '#') {
        blocked.push_back(1);
      } else if (ch == '.') {
        blocked.push_back(0);
      } else {
        throw std::invalid_argument(std::string("load_map: unknown character '") + ch + "'");
      }
    }
  }
  if (std::find(blocked.begin(), blocked.end(), std::uint8_t{0}) == blocked.end()) {
    throw std::invalid_argument("load_map: no free cells");
  }
  return GridMap(static_cast<int>(width), static_cast<int>(rows.size()), std::move(blocked),
                 resolution);
}

GridMap load_map_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file: " + path.string());
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  constexpr std::string_view kKey = "resolution=";
  if (header.rfind(kKey, 0) != 0) {
    throw std::invalid_argument("map file: expected 'resolution=<float>' header");
  }
  double resolution = 0.0;
  try {
    std::size_t used = 0;
    resolution = std::stod(header.substr(kKey.size()), &used);
    if (used != header.size() - kKey.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("map file: malformed resolution '" + header + "'");
  }
  std::stringstream body;
  body << in.rdbuf();
  return load_map(body.str(), resolution);
}

std::string map_file_text(const GridMap& map) {
  std::ostringstream out;
  out << "resolution=" << map.resolution() << '\n' << map.to_text();
  return out.str();
}

namespace {

using Grid = std::vector<std::uint8_t>;

void carve_rooms(Grid& g, int width, int x0, int y0, int x1, int y1, Rng& rng) {
  // Walls go on even coordinates, doors on odd ones, so doors are never
  // sealed by a later perpendicular wall.
  const int w = x1 - x0 + 1;
  const int h = y1 - y0 + 1;
  constexpr int kMinRoom = 3;
  std::vector<int> xs, ys;
  for (int x = x0 + kMinRoom; x <= x1 - kMinRoom; ++x) {
    if (x % 2 == 0) xs.push_back(x);
  }
  for (int y = y0 + kMinRoom; y <= y1 - kMinRoom; ++y) {
    if (y % 2 == 0) ys.push_back(y);
  }
  if (xs.empty() && ys.empty()) return;
  const bool vertical = ys.empty() || (!xs.empty() && (w > h || (w == h && rng.bernoulli(0.5))));
  if (vertical) {
    const int wx = xs[rng.uniform_index(xs.size())];
    std::vector<int> doors;
    for (int y = y0; y <= y1; ++y) {
      if (y % 2 == 1) doors.push_back(y);
    }
    const int door = doors[rng.uniform_index(doors.size())];
    for (int y = y0; y <= y1; ++y) {
      if (y != door) g[y * width + wx] = 1;
    }
    carve_rooms(g, width, x0, y0, wx - 1, y1, rng);
    carve_rooms(g, width, wx + 1, y0, x1, y1, rng);
  } else {
    const int wy = ys[rng.uniform_index(ys.size())];
    std::vector<int> doors;
    for (int x = x0; x <= x1; ++x) {
      if (x % 2 == 1) doors.push_back(x);
    }
    const int door = doors[rng.uniform_index(doors.size())];
    for (int x = x0; x <= x1; ++x) {
      if (x != door) g[wy * width + x] = 1;
    }
    carve_rooms(g, width, x0, y0, x1, wy - 1, rng);
    carve_rooms(g, width, x0, wy + 1, x1, y1, rng);
  }
}

void carve_maze(Grid& g, int width, int height, Rng& rng) {
  std::fill(g.begin(), g.end(), std::uint8_t{1});
  // Cells at odd coordinates are corridor nodes; iterative backtracker.
  std::vector<Cell> stack{{1, 1}};
  g[1 * width + 1] = 0;
  const Cell dirs[4] = {{0, -2}, {2, 0}, {0, 2}, {-2, 0}};
  while (!stack.empty()) {
    const Cell c = stack.back();
    std::vector<Cell> options;
    for (const Cell d : dirs) {
      const Cell n = c + d;
      if (n.x >= 1 && n.y >= 1 && n.x <= width - 2 && n.y <= height - 2 && g[n.y * width + n.x]) {
        options.push_back(d);
      }
    }
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const Cell d = options[rng.uniform_index(options.size())];
    const Cell n = c + d;
    g[(c.y + d.y / 2) * width + (c.x + d.x / 2)] = 0;
    g[n.y * width + n.x] = 0;
    stack.push_back(n);
  }
}

}  // namespace

GridMap generate_map(std::uint64_t seed, int width, int height, MapStyle style,
                     double resolution) {
  if (width < 4 || height < 4) throw std::invalid_argument("generate_map: dimensions below 4");
  Rng rng(derive_seed(seed, 0x6d6170u, static_cast<std::uint64_t>(style)));
  Grid g(static_cast<std::size_t>(width) * height, 0);
  for (int x = 0; x < width; ++x) {
    g[x] = 1;
    g[(height - 1) * width + x] = 1;
  }
  for (int y = 0; y < height; ++y) {
    g[y * width] = 1;
    g[y * width + width - 1] = 1;
  }
  switch (style) {
    case MapStyle::Open: break;
    case MapStyle::Rooms: carve_rooms(g, width, 1, 1, width - 2, height - 2, rng); break;
    case MapStyle::Maze: carve_maze(g, width, height, rng); break;
  }
  return GridMap(width, height, std::move(g), resolution);
}

std::vector<int> component_labels(const GridMap& map) {
  std::vector<int> label(map.cell_count(), -1);
  int next = 0;
  for (int i = 0; i < map.cell_count(); ++i) {
    if (label[i] != -1 || map.blocked(map.cell_at(i))) continue;
    std::queue<int> q;
    q.push(i);
    label[i] = next;
    while (!q.empty()) {
      const Cell c = map.cell_at(q.front());
      q.pop();
      for (int k = 0; k < 4; ++k) {
        const Cell n = c + offset(heading_from_index(k));
        if (map.blocked(n)) continue;
        const int j = map.index(n);
        if (label[j] == -1) {
          label[j] = next;
          q.push(j);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<Cell> largest_component(const GridMap& map) {
  const auto label = component_labels(map);
  const int n_labels = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<int> sizes(n_labels, 0);
  for (int l : label) {
    if (l >= 0) ++sizes[l];
  }
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Cell> out;
  for (int i = 0; i < map.cell_count(); ++i) {
    if (label[i] == best) out.push_back(map.cell_at(i));
  }
  return out;
}

}  // namespace dynav
