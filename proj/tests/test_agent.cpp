#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "dynav/agent/discretizer.hpp"
#include "dynav/agent/nav_env.hpp"
#include "dynav/agent/policy.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace dynav;
using nn::Tensor;

namespace {

// Stride arithmetic written out independently of the layer code.
std::vector<int> after(const nn::ConvSpec& s, std::vector<int> in) {
  if (s.transposed) return {s.out_channels, (in[1] - 1) * s.sh + s.kh, (in[2] - 1) * s.sw + s.kw};
  return {s.out_channels, (in[1] - s.kh) / s.sh + 1, (in[2] - s.kw) / s.sw + 1};
}

std::vector<std::vector<int>> chain(const std::vector<nn::ConvSpec>& specs, std::vector<int> in) {
  std::vector<std::vector<int>> out;
  for (const auto& s : specs) out.push_back(in = after(s, in));
  return out;
}

Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = lo + (hi - lo) * rng.uniform();
  return t;
}

NetworkProfile tiny_profile(bool aux = false) {
  auto p = make_profile("desk16k", 6, 6, 3);
  p.audio_features = p.fusion_features = p.depth_features = 6;
  p.hidden_size = 5;
  p.n_rays = 16;
  p.depth_convs = {{2, 1, 4, 1, 2}, {3, 1, 3, 1, 2}};
  p.fusion_convs = {{3, 3, 3, 1, 1}, {3, 3, 3, 2, 2}};
  p.aux_decoder = aux;
  return p;
}

PolicyInput random_input(const NetworkProfile& p, Rng& rng) {
  const auto s = p.spectrogram();
  PolicyInput in{random_tensor({2, s.freq_bins, s.frames}, rng, 0.0, 3.0), random_tensor({1, 1, p.n_rays}, rng, 0.0, 1.0),
                 Tensor({2, p.view_h, p.view_w})};
  for (auto& v : in.view.values()) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return in;
}

std::shared_ptr<const MapPool> pool_of(std::initializer_list<const char*> maps) {
  auto pool = std::make_shared<MapPool>();
  for (const char* m : maps) pool->push_back(std::make_shared<const NavGraph>(load_map(m)));
  return pool;
}

std::shared_ptr<const SoundBank> shared_bank() {
  static const auto bank = std::make_shared<const SoundBank>();
  return bank;
}

EnvConfig small_config() {
  EnvConfig cfg;
  cfg.target_classes = {0, 1, 2, 3};
  cfg.n_rays = 16;
  cfg.max_steps = 60;
  return cfg;
}

}  // namespace

TEST_CASE("profile layer shapes follow stride arithmetic") {
  for (const auto& name : profile_names()) {
    const auto p = make_profile(name);
    const auto s = profile_shapes(p);
    const auto spec = p.spectrogram();
    CHECK(s.audio == chain(p.audio_convs, {2, spec.freq_bins, spec.frames}));
    CHECK(s.spatial == chain(p.spatial_convs, {2, spec.freq_bins, spec.frames}));
    CHECK(s.fusion == chain(p.fusion_convs, {4, p.view_h, p.view_w}));
    CHECK(s.depth == chain(p.depth_convs, {1, 1, p.n_rays}));
    CHECK(s.decoder.back()[0] == 2);
  }
  const auto d16 = profile_shapes(make_profile("desk16k"));
  CHECK(d16.audio == std::vector<std::vector<int>>{{8, 15, 5}, {16, 7, 2}, {16, 5, 1}});
  CHECK(d16.spatial == std::vector<std::vector<int>>{{4, 8, 8}, {2, 10, 10}});
  CHECK(d16.depth.back() == std::vector<int>{8, 1, 4});
  const auto d44 = profile_shapes(make_profile("desk44k"));
  CHECK(d44.audio == std::vector<std::vector<int>>{{8, 15, 16}, {16, 7, 7}, {16, 5, 5}});
  const auto rep = profile_shapes(make_profile("replica44k"));
  CHECK(rep.audio.back() == std::vector<int>{64, 4, 5});
  CHECK(rep.spatial == std::vector<std::vector<int>>{{2, 200, 212}, {2, 200, 224}});
  CHECK(rep.fusion == std::vector<std::vector<int>>{{32, 49, 49}, {64, 23, 23}, {64, 21, 21}});
  const auto mp = profile_shapes(make_profile("mp3d16k"));
  CHECK(mp.audio.back() == std::vector<int>{64, 13, 3});
  CHECK(mp.spatial == std::vector<std::vector<int>>{{2, 197, 102}, {2, 200, 204}, {2, 200, 200}});
  CHECK_THROWS(make_profile("nope"));
  CHECK_THROWS(make_profile("desk16k", 8, 8, 4));
  auto bad = make_profile("desk16k", 2, 2, 3);
  CHECK_THROWS(profile_shapes(bad));
}

TEST_CASE("encoders are deterministic and finite on zero input") {
  const auto p = make_profile("desk16k");
  const PolicyNetwork a(p, 11), b(p, 11), c(p, 12);
  const auto spec = p.spectrogram();
  const Tensor zero({2, spec.freq_bins, spec.frames});
  const auto fa = a.encode_audio(zero);
  CHECK(fa.size() == 64);
  CHECK(fa.all_finite());
  CHECK(fa == b.encode_audio(zero));
  Rng rng(3);
  const auto x = random_tensor({2, spec.freq_bins, spec.frames}, rng, 0.0, 3.0);
  CHECK(a.encode_audio(x) == b.encode_audio(x));
  CHECK_FALSE(a.encode_audio(x) == c.encode_audio(x));
  CHECK_THROWS(a.encode_audio(Tensor({2, 65, 69})));
}

TEST_CASE("spatial audio encoder matches the map view size") {
  for (const auto& [h, w] : {std::pair{8, 8}, std::pair{12, 10}, std::pair{16, 16}}) {
    const auto p = make_profile("desk44k", h, w, 3);
    const PolicyNetwork net(p, 5);
    const auto spec = p.spectrogram();
    const auto zero = net.encode_spatial_audio(Tensor({2, spec.freq_bins, spec.frames}));
    REQUIRE(zero.shape() == std::vector<int>{2, h, w});
    // Bias-only response is constant within each channel.
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) CHECK(zero.at(c, i, j) == zero.at(c, 0, 0));
      }
    }
  }
}

TEST_CASE("fusion is positional in its channels and checks spatial agreement") {
  const auto p = make_profile("desk16k");
  const PolicyNetwork net(p, 9);
  Rng rng(4);
  const auto sa = random_tensor({2, 8, 8}, rng, 0.0, 1.0);
  const auto view = random_tensor({2, 8, 8}, rng, 0.0, 1.0);
  const auto f = net.fuse_audio_visual(sa, view);
  CHECK(f.size() == 64);
  CHECK_FALSE(f == net.fuse_audio_visual(view, sa));
  CHECK(net.fuse_audio_visual(Tensor({2, 8, 8}), Tensor({2, 8, 8})) ==
        net.fuse_audio_visual(Tensor({2, 8, 8}), Tensor({2, 8, 8})));
  CHECK_THROWS(net.fuse_audio_visual(sa, Tensor({2, 7, 8})));
}

TEST_CASE("policy forward is a pure function with finite heads") {
  const auto p = make_profile("desk16k");
  const PolicyNetwork net(p, 21);
  Rng rng(8);
  const auto in = random_input(p, rng);
  const auto h0 = random_tensor({64}, rng);
  const auto o1 = net.forward(in, h0);
  const auto o2 = net.forward(in, h0);
  CHECK(o1.logits == o2.logits);
  CHECK(o1.value == o2.value);
  CHECK(o1.h == o2.h);
  CHECK(o1.logits.size() == 9);
  const auto spec = p.spectrogram();
  const PolicyInput zero{Tensor({2, spec.freq_bins, spec.frames}), Tensor({1, 1, 64}), Tensor({2, 8, 8})};
  const auto oz = net.forward(zero, net.initial_state());
  CHECK(std::isfinite(oz.value));
  CHECK(oz.logits.all_finite());
  CHECK(net.params().value(net.params().index_of("gru.W_r")).shape() == std::vector<int>{64, 192});
}

TEST_CASE("full network gradient check at tiny scale") {
  // L = a*log p(action) + b*entropy + c*value + <w, h'> (+ MSE reconstruction)
  for (const bool aux : {false, true}) {
    for (int instance = 0; instance < 20; ++instance) {
      CAPTURE(aux);
      CAPTURE(instance);
      Rng rng(1000 + instance);
      const auto p = tiny_profile(aux);
      PolicyNetwork net(p, 77 + instance);
      // Zero-initialised biases would put dead units exactly on the ReLU kink.
      for (std::size_t t = 0; t < net.params().size(); ++t) {
        const auto& name = net.params().name(t);
        if (name.ends_with(".b")) net.params().value(t) = random_tensor(net.params().value(t).shape(), rng, -0.2, 0.2);
      }
      const auto in = random_input(p, rng);
      auto h_prev = random_tensor({p.hidden_size}, rng);
      const auto w = random_tensor({p.hidden_size}, rng);
      const auto spec = p.spectrogram();
      const auto target = random_tensor({2, spec.freq_bins, spec.frames}, rng, 0.0, 1.0);
      std::vector<std::uint8_t> mask(9, 1);
      for (int k = 0; k < 9; ++k) mask[k] = k == 4 || rng.bernoulli(0.7);
      int action = 4;
      while (!mask[action = static_cast<int>(rng.uniform_index(9))]) {}
      const double a = rng.uniform() - 0.5, b = rng.uniform() - 0.5, c = rng.uniform() - 0.5;

      const auto loss = [&] {
        const auto o = net.forward(in, h_prev);
        const auto d = nn::categorical_head(o.logits, mask);
        double l = a * d.log_prob(action) + b * d.entropy + c * o.value + o.h.dot(w);
        if (aux) {
          double mse = 0.0;
          for (std::size_t i = 0; i < target.size(); ++i) mse += std::pow(o.reconstruction[i] - target[i], 2);
          l += mse / static_cast<double>(target.size());
        }
        return l;
      };

      PolicyCache cache;
      const auto o = net.forward(in, h_prev, &cache);
      const auto d = nn::categorical_head(o.logits, mask);
      PolicyOutputGrads g;
      g.logits = nn::categorical_backward(d, action, a, b);
      g.value = c;
      g.h = w;
      if (aux) {
        g.reconstruction = Tensor(target.shape());
        for (std::size_t i = 0; i < target.size(); ++i) {
          g.reconstruction[i] = 2.0 * (o.reconstruction[i] - target[i]) / static_cast<double>(target.size());
        }
      }
      auto grads = net.params().zeros_like();
      const auto g_h_prev = net.backward(cache, g, grads);
      CHECK(gradcheck::max_error(loss, h_prev, g_h_prev) < gradcheck::kTolerance);

      // A few random entries of every parameter tensor.
      auto& params = net.params();
      for (std::size_t t = 0; t < params.size(); ++t) {
        auto& x = params.value(t);
        for (int s = 0; s < 3; ++s) {
          const std::size_t i = rng.uniform_index(x.size());
          const double keep = x[i];
          x[i] = keep + gradcheck::kStep;
          const double up = loss();
          x[i] = keep - gradcheck::kStep;
          const double down = loss();
          x[i] = keep;
          const double numeric = (up - down) / (2.0 * gradcheck::kStep);
          CAPTURE(params.name(t));
          CHECK(gradcheck::relative_error(grads[t][i], numeric) < gradcheck::kTolerance);
        }
      }
    }
  }
}

TEST_CASE("egocentric view rotates the map into the agent frame") {
  const auto map = load_map(
      "....\n"
      ".#..\n"
      "....\n"
      "....");
  GeometricMap g(4, 4);
  g.mark_occupied({1, 1});
  g.mark_explored({2, 2});
  // Facing north from (1,2): the wall is straight ahead.
  const auto north = egocentric_view(g, {{1, 2}, Heading::North}, 5, 5);
  CHECK(north.at(0, 1, 2) == 1.0);
  CHECK(north.at(1, 2, 3) == 1.0);  // (2,2) lies to the right
  // Facing east the same wall sits to the left.
  const auto east = egocentric_view(g, {{1, 2}, Heading::East}, 5, 5);
  CHECK(east.at(0, 2, 1) == 1.0);
  CHECK(east.at(1, 1, 2) == 1.0);  // (2,2) lies ahead
  // Off-map cells read as occupied and explored.
  const auto corner = egocentric_view(g, {{0, 0}, Heading::North}, 3, 3);
  CHECK(corner.at(0, 0, 1) == 1.0);
  CHECK(corner.at(1, 1, 0) == 1.0);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const Cell m = egocentric_cell({{1, 2}, Heading::West}, r, c, 5, 5);
      CHECK(std::abs(m.x - 1) + std::abs(m.y - 2) == std::abs(r - 2) + std::abs(c - 2));
    }
  }
  (void)map;
}

TEST_CASE("waypoint selection respects the mask") {
  const ActionMapGeometry g{3};
  Rng rng(1);
  Tensor logits({9}, {3.0, 0.5, -1.0, 2.0, 0.0, 1.0, -0.5, 0.25, 4.0});
  std::vector<std::uint8_t> only_center(9, 0);
  only_center[4] = 1;
  for (int i = 0; i < 100; ++i) {
    const auto s = select_waypoint(logits, only_center, rng, SelectMode::Sample, g);
    CHECK(s.stop);
    CHECK(s.index == 4);
  }
  std::vector<std::uint8_t> mask = {1, 1, 0, 1, 1, 0, 1, 1, 0};
  const auto first = select_waypoint(logits, mask, rng, SelectMode::Argmax, g);
  CHECK(first.index == 0);
  for (int i = 0; i < 10; ++i) CHECK(select_waypoint(logits, mask, rng, SelectMode::Argmax, g).index == 0);

  // Frequencies against the masked softmax.
  std::vector<double> expected(9, 0.0);
  double z = 0.0;
  for (int k = 0; k < 9; ++k) z += mask[k] ? std::exp(logits[k]) : 0.0;
  for (int k = 0; k < 9; ++k) expected[k] = mask[k] ? std::exp(logits[k]) / z : 0.0;
  std::vector<int> counts(9, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto s = select_waypoint(logits, mask, rng, SelectMode::Sample, g);
    ++counts[s.index];
    CHECK(s.dist.probs[2] == 0.0);
  }
  for (int k = 0; k < 9; ++k) {
    CAPTURE(k);
    CHECK(std::abs(counts[k] / double(n) - expected[k]) < 0.02);
    if (!mask[k]) CHECK(counts[k] == 0);
  }
}

TEST_CASE("waypoint mask matches the cell-heading action count oracle") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto map = generate_map(seed, 10, 10, seed % 2 ? MapStyle::Maze : MapStyle::Rooms);
    const NavGraph graph(map);
    for (const int K : {3, 5, 9}) {
      const ActionMapGeometry g{K};
      for (const Cell c : graph.largest_component()) {
        for (int h = 0; h < 4; ++h) {
          const AgentPose pose{c, heading_from_index(h)};
          const auto mask = waypoint_mask(map, pose, g);
          CHECK(mask[g.center()] == 1);
          for (int i = 0; i < K * K; ++i) {
            if (i == g.center()) continue;
            const Cell w = g.waypoint_cell(pose, i);
            const int n = map.is_free(w) ? oracle::action_count(map, c, h, w) : -1;
            CHECK(mask[i] == (n >= 0 && n <= 2 * (K / 2) + 2 ? 1 : 0));
          }
        }
      }
    }
  }
  const ActionMapGeometry g{3};
  const AgentPose facing_north{{5, 5}, Heading::North};
  CHECK(g.waypoint_cell(facing_north, 1) == Cell{5, 4});
  CHECK(g.waypoint_cell(facing_north, 5) == Cell{6, 5});
  CHECK(g.waypoint_cell(facing_north, 6) == Cell{4, 6});
}

TEST_CASE("executing waypoints") {
  auto cfg = small_config();
  const auto pool = pool_of({"......\n......\n......\n......\n......\n......"});
  NavEnv env(cfg, pool, shared_bank(), seed_everything(3));

  SUBCASE("stop leaves the agent in place and ends the episode") {
    env.reset(0);
    const auto before = env.pose();
    const auto out = env.step_waypoint(env.geometry().center());
    CHECK(out.done);
    CHECK(out.sub_steps == 1);
    CHECK(env.pose() == before);
    CHECK(env.record().path_length == 0);
    CHECK(out.success == (before.cell == env.source_cell()));
    CHECK_THROWS(env.step_waypoint(1));
  }
  SUBCASE("forward neighbour takes one sub-step, diagonals match the oracle") {
    for (std::uint64_t e = 0; e < 30; ++e) {
      env.reset(e);
      const auto mask = env.action_mask();
      for (int i = 0; i < 9; ++i) {
        if (!mask[i] || i == 4 || env.done()) continue;
        const auto pose = env.pose();
        const Cell w = env.geometry().waypoint_cell(pose, i);
        const int expected = oracle::action_count(env.graph().map(), pose.cell, static_cast<int>(pose.heading), w);
        const auto out = env.step_waypoint(i);
        if (!out.done) {
          CHECK(out.sub_steps == expected);
          CHECK(env.pose().cell == w);
        }
        if (i == 1 && !out.done) CHECK(out.sub_steps == 1);
        break;
      }
    }
  }
}

TEST_CASE("random rollouts never enter walls and respect the sub-step bound") {
  for (const int K : {3, 5, 9}) {
    auto cfg = small_config();
    cfg.action_map_size = K;
    cfg.task = TaskKind::Dynamic;
    auto pool = std::make_shared<const MapPool>(make_map_pool(7, 3, 9, 9, MapStyle::Rooms));
    NavEnv env(cfg, pool, shared_bank(), seed_everything(K));
    Rng rng(K);
    for (std::uint64_t e = 0; e < 15; ++e) {
      env.reset(e);
      while (!env.done()) {
        const auto mask = env.action_mask();
        std::vector<int> allowed;
        for (int i = 0; i < K * K; ++i) {
          if (mask[i] && (i != K * K / 2 || rng.bernoulli(0.05))) allowed.push_back(i);
        }
        if (allowed.empty()) allowed.push_back(K * K / 2);
        const auto out = env.step_waypoint(allowed[rng.uniform_index(allowed.size())]);
        CHECK(out.sub_steps <= 2 * (K / 2) + 2);
        CHECK(env.graph().map().is_free(env.pose().cell));
      }
      CHECK(env.record().steps.size() <= static_cast<std::size_t>(cfg.max_steps));
    }
  }
}

TEST_CASE("environment logs replay into the same rewards and poses") {
  auto cfg = small_config();
  cfg.task = TaskKind::Dynamic;
  cfg.scenario = ScenarioKind::Complex;
  auto pool = std::make_shared<const MapPool>(make_map_pool(3, 2, 8, 8, MapStyle::Open));
  NavEnv env(cfg, pool, shared_bank(), seed_everything(5));
  Rng rng(2);
  for (std::uint64_t e = 0; e < 20; ++e) {
    env.reset(e);
    while (!env.done()) {
      const auto mask = env.action_mask();
      int i;
      do i = static_cast<int>(rng.uniform_index(9));
      while (!mask[i]);
      env.step_waypoint(i);
    }
    const auto& rec = env.record();
    AgentPose pose = rec.start;
    int moves = 0;
    for (std::size_t t = 0; t < rec.steps.size(); ++t) {
      const auto& s = rec.steps[t];
      const auto next = step_low_level(rec.graph->map(), pose, s.action).pose;
      CHECK(next == s.pose);
      moves += next.cell != pose.cell;
      CHECK(s.reward == compute_reward(*rec.graph, pose.cell, next.cell, rec.source_at(t), s.action, cfg.reward));
      pose = next;
    }
    CHECK(moves == rec.path_length);
    const bool stopped = !rec.steps.empty() && rec.steps.back().action == LowLevelAction::Stop;
    CHECK(rec.success == (stopped && rec.steps.back().pose.cell == rec.steps.back().source));
  }
}

TEST_CASE("episodes are reproducible and streams are isolated") {
  auto cfg = small_config();
  cfg.task = TaskKind::Dynamic;
  cfg.scenario = ScenarioKind::Complex;
  auto pool = std::make_shared<const MapPool>(make_map_pool(3, 4, 8, 8, MapStyle::Rooms));
  const auto seeds = seed_everything(99);
  NavEnv a(cfg, pool, shared_bank(), seeds), b(cfg, pool, shared_bank(), seeds);
  auto other_aug = seeds;
  other_aug.augmentation ^= 0x1234;
  NavEnv c(cfg, pool, shared_bank(), other_aug);
  for (std::uint64_t e = 0; e < 10; ++e) {
    const auto& oa = a.reset(e);
    const auto& ob = b.reset(e);
    const auto& oc = c.reset(e);
    CHECK(oa.spectrogram == ob.spectrogram);
    CHECK(a.pose() == c.pose());
    CHECK(a.source_cell() == c.source_cell());
    CHECK(&a.graph() == &c.graph());
    CHECK(a.scenario().target_class == c.scenario().target_class);
    (void)oc;
  }
  NavEnv d(cfg, pool, shared_bank(), seed_everything(100));
  int differing = 0;
  for (std::uint64_t e = 0; e < 10; ++e) {
    a.reset(e);
    d.reset(e);
    differing += a.pose() != d.pose() || a.source_cell() != d.source_cell();
  }
  CHECK(differing > 0);
}

TEST_CASE("rewards") {
  const NavGraph graph(load_map("....\n....\n...."));
  CHECK(compute_reward(graph, {1, 1}, {1, 1}, {1, 1}, LowLevelAction::Stop) == doctest::Approx(9.99).epsilon(1e-15));
  CHECK(compute_reward(graph, {0, 0}, {0, 0}, {3, 2}, LowLevelAction::RotateLeft) == doctest::Approx(-0.01));
  CHECK(compute_reward(graph, {0, 0}, {1, 0}, {3, 2}, LowLevelAction::MoveForward) == doctest::Approx(0.24));
  CHECK(compute_reward(graph, {1, 0}, {0, 0}, {3, 2}, LowLevelAction::MoveForward) == doctest::Approx(-0.26));
  CHECK(compute_reward(graph, {0, 0}, {0, 0}, {3, 2}, LowLevelAction::Stop) == doctest::Approx(-0.01));
}

namespace {

// The accumulate/snap arithmetic carried out literally in metres with
// floating-point positions, used as the discretizer oracle.
struct LiteralDiscretizer {
  double res;
  long prev_id = -1;
  double cur[2]{}, inter[2]{}, disc[2]{};

  // Returns the target position in metres.
  std::pair<double, double> step(long id, double cx, double cy, double v, double omega) {
    cur[0] = cx;
    cur[1] = cy;
    if (id != prev_id || std::abs(cx - disc[0]) > 1e-9 || std::abs(cy - disc[1]) > 1e-9) {
      inter[0] = disc[0] = cx;
      inter[1] = disc[1] = cy;
    }
    const double rad = omega * std::numbers::pi / 180.0;
    inter[0] += v * std::cos(rad);
    inter[1] += v * std::sin(rad);
    const double threshold = res / 2;
    for (int k = 0; k < 2; ++k) {
      if (inter[k] >= cur[k]) {
        const double steps = std::floor((inter[k] - cur[k]) / res);
        const double mod = std::fmod(inter[k] - cur[k], res);
        disc[k] = cur[k] + steps * res;
        if (mod > threshold) disc[k] += res;
      } else {
        const double steps = std::floor((cur[k] - inter[k]) / res);
        const double mod = std::fmod(cur[k] - inter[k], res);
        disc[k] = cur[k] - steps * res;
        if (mod > threshold) disc[k] -= res;
      }
    }
    prev_id = id;
    return {disc[0], disc[1]};
  }
};

}  // namespace

TEST_CASE("continuous action discretization") {
  DiscretizerState s;
  SUBCASE("zero velocity idles") {
    for (int i = 0; i < 20; ++i) {
      const auto t = discretize_continuous(0.0, 37.0, s, 1, {4, 4}, 0.5);
      CHECK(t.idle);
      CHECK(t.cell == Cell{4, 4});
    }
  }
  SUBCASE("full speed east advances two cells per step at 0.5 m") {
    Cell cur{0, 0};
    for (int i = 1; i <= 4; ++i) {
      const auto t = discretize_continuous(1.0, 0.0, s, 1, cur, 0.5);
      CHECK_FALSE(t.idle);
      CHECK(t.cell == Cell{2 * i, 0});
      cur = t.cell;
    }
  }
  SUBCASE("below threshold idles") {
    const auto t = discretize_continuous(0.24, 0.0, s, 1, {0, 0}, 0.5, 0.0, 0.25);
    CHECK(t.idle);
    // Still on the emitted cell, so the accumulator keeps 0.24 and the next
    // 0.02 crosses 0.25.
    CHECK(discretize_continuous(0.02, 0.0, s, 1, {0, 0}, 0.5, 0.0, 0.25).cell == Cell{1, 0});
  }
  SUBCASE("positive angle points north") {
    const auto t = discretize_continuous(1.0, 90.0, s, 1, {3, 5}, 0.5);
    CHECK(t.cell == Cell{3, 3});
    CHECK(discretize_continuous(1.0, 0.0, s, 2, {3, 5}, 0.5, 90.0).cell == Cell{3, 3});
  }
  SUBCASE("episode change resets the accumulator") {
    discretize_continuous(0.2, 0.0, s, 1, {0, 0}, 0.5);
    CHECK(discretize_continuous(0.2, 0.0, s, 1, {0, 0}, 0.5).idle == false);
    CHECK(discretize_continuous(0.2, 0.0, s, 2, {0, 0}, 0.5).idle);
  }
  SUBCASE("range errors") {
    CHECK_THROWS(discretize_continuous(1.1, 0.0, s, 1, {0, 0}, 0.5));
    CHECK_THROWS(discretize_continuous(0.5, 91.0, s, 1, {0, 0}, 0.5));
    CHECK_THROWS(discretize_continuous(0.5, 0.0, s, 1, {0, 0}, 0.0));
  }
}

TEST_CASE("discretizer composed with execute-to-cell matches the literal arithmetic") {
  // A large open map so every target stays inside.
  std::string rows;
  for (int r = 0; r < 80; ++r) rows += std::string(80, '.') + "\n";
  const auto map = load_map(rows, 0.5);
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    DiscretizerState s;
    LiteralDiscretizer lit{0.5};
    Cell cur{40, 40};
    AgentPose pose{cur, Heading::East};
    const long id = trial;
    for (int step = 0; step < 30; ++step) {
      const double v = rng.bernoulli(0.2) ? 0.0 : rng.uniform();
      const double omega = -90.0 + 180.0 * rng.uniform();
      const auto t = discretize_continuous(v, omega, s, static_cast<std::uint64_t>(id), cur, 0.5);
      // The literal oracle works in metres with y north.
      const auto [mx, my] = lit.step(id, cur.x * 0.5, -cur.y * 0.5, v, omega);
      const Cell expect{static_cast<int>(std::lround(mx / 0.5)), static_cast<int>(std::lround(-my / 0.5))};
      REQUIRE(t.cell == expect);
      if (!t.idle) {
        for (const auto a : plan_actions(map, pose, t.cell)) pose = step_low_level(map, pose, a).pose;
        REQUIRE(pose.cell == t.cell);
        cur = pose.cell;
      }
    }
  }
}
