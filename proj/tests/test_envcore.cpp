#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "dynav/common/rng.hpp"
#include "dynav/envcore/grid_map.hpp"
#include "dynav/envcore/kinematics.hpp"
#include "dynav/envcore/nav_graph.hpp"
#include "dynav/envcore/sensing.hpp"
#include "oracles.hpp"

using namespace dynav;

namespace {

const char* kMaze10 =
    "##########\n"
    "#........#\n"
    "#.######.#\n"
    "#.#....#.#\n"
    "#.#.##.#.#\n"
    "#.#.##...#\n"
    "#.#....#.#\n"
    "#.####.#.#\n"
    "#........#\n"
    "##########";

Cell random_free(const GridMap& map, Rng& rng) {
  const auto cells = largest_component(map);
  return cells[rng.uniform_index(cells.size())];
}

}  // namespace

TEST_CASE("load_map parses grids and rejects malformed text") {
  const auto open = load_map("..\n..", 0.5);
  CHECK(open.width() == 2);
  CHECK(open.height() == 2);
  CHECK(open.free_count() == 4);
  CHECK(open.resolution() == 0.5);

  const auto diag = load_map("#.\n.#");
  CHECK(diag.free_count() == 2);
  const NavGraph g(diag);
  CHECK_FALSE(g.connected({1, 0}, {0, 1}));

  const std::string text = kMaze10;
  const auto maze = load_map(text);
  CHECK(maze.free_count() == std::count(text.begin(), text.end(), '.'));

  CHECK_THROWS_AS(load_map("..\n."), std::invalid_argument);
  CHECK_THROWS_AS(load_map(".x"), std::invalid_argument);
  CHECK_THROWS_AS(load_map("##\n##"), std::invalid_argument);
  CHECK(load_map(maze.to_text()) == maze);
}

TEST_CASE("generate_map is deterministic, bordered and mostly connected") {
  const auto open = generate_map(1, 8, 8, MapStyle::Open);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      const bool border = x == 0 || y == 0 || x == 7 || y == 7;
      CHECK(open.blocked({x, y}) == border);
    }
  }
  for (const auto style : {MapStyle::Open, MapStyle::Rooms, MapStyle::Maze}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto a = generate_map(seed, 16, 12, style);
      CHECK(a == generate_map(seed, 16, 12, style));
      for (int x = 0; x < a.width(); ++x) {
        CHECK(a.blocked({x, 0}));
        CHECK(a.blocked({x, a.height() - 1}));
      }
      const auto comp = largest_component(a);
      CHECK(2 * comp.size() >= static_cast<std::size_t>(a.free_count()));
    }
  }
  const auto maze = generate_map(7, 16, 16, MapStyle::Maze);
  const auto comp = largest_component(maze);
  const auto filled = oracle::flood_fill(maze, comp.front());
  CHECK(filled.size() == comp.size());
  CHECK(static_cast<int>(filled.size()) == maze.free_count());
  CHECK_THROWS_AS(generate_map(1, 3, 8, MapStyle::Open), std::invalid_argument);
}

TEST_CASE("geodesic distance matches full-graph Dijkstra and is a metric") {
  Rng rng(11);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto map = generate_map(seed, 12, 12, seed % 2 ? MapStyle::Maze : MapStyle::Rooms);
    const NavGraph graph(map);
    const auto og = oracle::build_graph(map);
    for (int k = 0; k < 40; ++k) {
      const Cell a = random_free(map, rng);
      const Cell b = random_free(map, rng);
      const Cell c = random_free(map, rng);
      const int dab = *geodesic_distance(graph, a, b);
      CHECK(dab == oracle::dijkstra(og, a, b));
      CHECK(dab == *graph.distance(b, a));
      CHECK(*graph.distance(a, a) == 0);
      CHECK(dab <= *graph.distance(a, c) + *graph.distance(c, b));
    }
  }
  const NavGraph g(load_map("...\n..."));
  CHECK(*g.distance({0, 0}, {1, 0}) == 1);
  const NavGraph diag(load_map("#.\n.#"));
  CHECK_FALSE(diag.distance({1, 0}, {0, 1}).has_value());
  CHECK_THROWS_AS(diag.distance({0, 0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("shortest paths are adjacent, optimal and deterministic") {
  const NavGraph corridor(load_map("#######\n#.....#\n#######"));
  const auto p = shortest_path(corridor, {1, 1}, {5, 1});
  CHECK(p == std::vector<Cell>{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}});
  CHECK(shortest_path(corridor, {3, 1}, {3, 1}) == std::vector<Cell>{{3, 1}});

  // On an open square the N, E, S, W order moves north before east.
  const NavGraph square(load_map("...\n...\n..."));
  const auto q = shortest_path(square, {0, 2}, {2, 0});
  CHECK(q[1] == Cell{0, 1});

  Rng rng(5);
  const auto map = load_map(kMaze10);
  const NavGraph graph(map);
  const auto og = oracle::build_graph(map);
  for (int k = 0; k < 100; ++k) {
    const Cell a = random_free(map, rng);
    const Cell b = random_free(map, rng);
    const auto path = graph.shortest_path(a, b);
    CHECK(path.front() == a);
    CHECK(path.back() == b);
    CHECK(static_cast<double>(path.size() - 1) == oracle::dijkstra(og, a, b));
    for (std::size_t i = 1; i < path.size(); ++i) {
      CHECK(std::abs(path[i].x - path[i - 1].x) + std::abs(path[i].y - path[i - 1].y) == 1);
      CHECK(map.is_free(path[i]));
    }
  }
  const NavGraph diag(load_map("#.\n.#"));
  CHECK_THROWS(diag.shortest_path({1, 0}, {0, 1}));
}

TEST_CASE("low-level kinematics") {
  const auto map = load_map("###\n#..\n###");
  AgentPose pose{{1, 1}, Heading::East};
  auto out = step_low_level(map, pose, LowLevelAction::RotateLeft);
  CHECK(out.pose.heading == Heading::North);
  CHECK(degrees(out.pose.heading) == 90);
  CHECK(out.pose.cell == pose.cell);

  out = step_low_level(map, {{1, 1}, Heading::North}, LowLevelAction::MoveForward);
  CHECK(out.collided);
  CHECK(out.pose == AgentPose{{1, 1}, Heading::North});

  AgentPose p = pose;
  for (int i = 0; i < 4; ++i) p = step_low_level(map, p, LowLevelAction::RotateLeft).pose;
  CHECK(p == pose);

  out = step_low_level(map, pose, LowLevelAction::MoveForward);
  CHECK_FALSE(out.collided);
  CHECK(out.pose.cell == Cell{2, 1});

  Rng rng(3);
  const auto maze = generate_map(4, 14, 14, MapStyle::Maze);
  AgentPose walker{largest_component(maze).front(), Heading::South};
  for (int i = 0; i < 2000; ++i) {
    walker = step_low_level(maze, walker, static_cast<LowLevelAction>(rng.uniform_index(3))).pose;
    CHECK(maze.is_free(walker.cell));
  }
}

TEST_CASE("shortest action counts and plans") {
  const auto map = load_map(".....\n.....\n.....");
  const AgentPose pose{{2, 1}, Heading::East};
  CHECK(*shortest_action_count(map, pose, {2, 1}) == 0);
  CHECK(*shortest_action_count(map, pose, {3, 1}) == 1);
  CHECK(*shortest_action_count(map, pose, {1, 1}) == 3);
  const auto behind = plan_actions(map, pose, {1, 1});
  CHECK(behind == std::vector<LowLevelAction>{LowLevelAction::RotateLeft, LowLevelAction::RotateLeft,
                                              LowLevelAction::MoveForward});

  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto m = generate_map(seed, 12, 10, MapStyle::Rooms);
    const NavGraph graph(m);
    for (int k = 0; k < 25; ++k) {
      const AgentPose start{random_free(m, rng), heading_from_index(static_cast<int>(rng.uniform_index(4)))};
      const Cell target = random_free(m, rng);
      const int n = *shortest_action_count(m, start, target);
      CHECK(n == oracle::action_count(m, start.cell, static_cast<int>(start.heading), target));
      const int d = *graph.distance(start.cell, target);
      CHECK(n >= d);
      CHECK(n <= d + 2 * d + 2);
      const auto plan = plan_actions(m, start, target);
      CHECK(static_cast<int>(plan.size()) == n);
      AgentPose s = start;
      for (const auto a : plan) {
        const auto o = step_low_level(m, s, a);
        CHECK_FALSE(o.collided);
        s = o.pose;
      }
      CHECK(s.cell == target);
    }
  }
}

TEST_CASE("ray casting against walls") {
  const auto corridor = load_map("########\n#......#\n########");
  const AgentPose pose{{1, 1}, Heading::East};
  // Wall at x = 7 is six cells ahead; the spec's wall-at-5 case is x = 6.
  const auto scan = ray_cast_scan(corridor, pose, 1, 0.0, 20.0);
  CHECK(scan.distances[0] == doctest::Approx(6.0));
  const auto shorter = load_map("#######\n#.....#\n#######");
  CHECK(ray_cast_scan(shorter, pose, 1, 0.0, 20.0).distances[0] == doctest::Approx(5.0));
  CHECK(ray_cast_scan(shorter, {{5, 1}, Heading::East}, 1, 0.0, 20.0).distances[0] ==
        doctest::Approx(1.0));

  const std::string row(30, '.');
  std::string open_text;
  for (int y = 0; y < 30; ++y) open_text += row + (y + 1 < 30 ? "\n" : "");
  const auto open = load_map(open_text);
  const auto far = ray_cast_scan(open, {{15, 15}, Heading::North}, 64, 90.0, 5.0);
  for (double d : far.distances) CHECK(d == 5.0);
  CHECK(far.angles_deg.front() == doctest::Approx(45.0));
  CHECK(far.angles_deg.back() == doctest::Approx(135.0));

  Rng rng(23);
  const auto rooms = generate_map(2, 16, 16, MapStyle::Rooms);
  for (int k = 0; k < 200; ++k) {
    const Cell c = random_free(rooms, rng);
    const double angle = rng.uniform() * 360.0;
    if (std::fmod(angle, 45.0) < 0.5 || std::fmod(angle, 45.0) > 44.5) continue;
    double dist = 10.0;
    walk_ray(c, angle, [&](Cell q, double t) {
      if (t == 0.0) return true;
      if (t + 0.5 > 10.0) return false;
      if (rooms.blocked(q)) {
        dist = t + 0.5;
        return false;
      }
      return true;
    });
    CHECK(dist == doctest::Approx(oracle::ray_distance(rooms, c, angle, 10.0)).epsilon(1e-3));
  }
}

TEST_CASE("scan distances against the fine-sampling oracle") {
  Rng rng(29);
  const auto rooms = generate_map(9, 18, 14, MapStyle::Rooms);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const AgentPose pose{random_free(rooms, rng), heading_from_index(static_cast<int>(rng.uniform_index(4)))};
    const auto scan = ray_cast_scan(rooms, pose, 17, 80.0, 8.0);
    for (std::size_t i = 0; i < scan.size(); ++i) {
      CHECK(scan.distances[i] > 0.0);
      CHECK(scan.distances[i] <= 8.0);
      const double ref = oracle::ray_distance(rooms, pose.cell, scan.angles_deg[i], 8.0);
      CHECK(std::abs(scan.distances[i] - ref) < 2e-3);
      ++checked;
    }
  }
  CHECK(checked == 60 * 17);
}

TEST_CASE("geometric map updates") {
  const auto map = generate_map(3, 12, 12, MapStyle::Rooms);
  Rng rng(31);
  const AgentPose pose{random_free(map, rng), Heading::West};
  const auto scan = ray_cast_scan(map, pose, 64, 90.0, 6.0);
  GeometricMap g(map.width(), map.height());
  update_geometric_map(g, pose, scan);

  // Oracle: collect traversed cells by re-walking each ray to its endpoint.
  std::set<Cell> traversed{pose.cell};
  for (std::size_t i = 0; i < scan.size(); ++i) {
    walk_ray(pose.cell, scan.angles_deg[i], [&](Cell c, double t) {
      if (t + 0.5 > scan.distances[i] + 1e-9) return false;
      traversed.insert(c);
      return !map.blocked(c);
    });
  }
  CHECK(g.explored_count() == static_cast<int>(traversed.size()));
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (g.occupied({x, y})) {
        CHECK(g.explored({x, y}));
        CHECK(map.blocked({x, y}));
      }
    }
  }
  const GeometricMap before = g;
  update_geometric_map(g, pose, scan);
  CHECK(g == before);

  GeometricMap walled(5, 3);
  const auto small = load_map("#####\n#..##\n#####");
  const AgentPose at{{2, 1}, Heading::East};
  update_geometric_map(walled, at, ray_cast_scan(small, at, 1, 0.0, 1.0));
  CHECK(walled.occupied_count() == 1);
  CHECK(walled.occupied({3, 1}));

  // Exploration is monotone along a random walk.
  GeometricMap m(map.width(), map.height());
  AgentPose p = pose;
  int last = 0;
  for (int i = 0; i < 200; ++i) {
    p = step_low_level(map, p, static_cast<LowLevelAction>(rng.uniform_index(3))).pose;
    update_geometric_map(m, p, ray_cast_scan(map, p, 16, 90.0, 4.0));
    CHECK(m.explored_count() >= last);
    last = m.explored_count();
  }
}
