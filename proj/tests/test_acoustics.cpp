#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "dynav/acoustics/propagation.hpp"
#include "dynav/acoustics/sound_bank.hpp"
#include "dynav/acoustics/spectrogram.hpp"
#include "dynav/common/rng.hpp"
#include "dynav/envcore/grid_map.hpp"

using namespace dynav;

namespace {

const SoundBank& bank() {
  static const SoundBank b;
  return b;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// Direct O(N^2) DFT spectrogram with the same framing conventions.
BinauralSpectrogram naive_spectrogram(const StereoChunk& chunk) {
  const auto shape = spectrogram_shape(chunk.size());
  BinauralSpectrogram out(shape);
  const int n = static_cast<int>(chunk.size());
  for (int c = 0; c < 2; ++c) {
    const auto& x = c == 0 ? chunk.left : chunk.right;
    for (int t = 0; t < shape.frames; ++t) {
      const int centre = t * 4 * 160;
      for (int f = 0; f < shape.freq_bins; ++f) {
        const int bin = 4 * f;
        std::complex<double> acc = 0.0;
        for (int k = 0; k < 400; ++k) {
          const int idx = centre - 200 + k;
          if (idx < 0 || idx >= n) continue;
          const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / 400.0);
          const int m = 56 + k;  // position within the 512-point frame
          acc += x[idx] * w * std::polar(1.0, -2.0 * std::numbers::pi * bin * m / 512.0);
        }
        out.at(f, t, c) = std::log1p(std::abs(acc));
      }
    }
  }
  return out;
}

GridMap mirrored_map(Rng& rng, int half_height, int width) {
  // Rows 0..half_height-1, a free axis row, then the mirror image.
  const int h = 2 * half_height + 1;
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(width) * h, 0);
  for (int y = 0; y < half_height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::uint8_t b = rng.bernoulli(0.25) ? 1 : 0;
      blocked[y * width + x] = b;
      blocked[(h - 1 - y) * width + x] = b;
    }
  }
  return GridMap(width, h, blocked, 0.5);
}

}  // namespace

TEST_CASE("spectrogram shapes follow the sample rate") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s16 = spectrogram(StereoChunk::silence(16000));
  CHECK(s16.freq_bins() == 65);
  CHECK(s16.frames() == 26);
  const auto s44 = spectrogram(StereoChunk::silence(44100));
  CHECK(s44.freq_bins() == 65);
  CHECK(s44.frames() == 69);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
  for (double v : s16.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(spectrogram(StereoChunk::silence(399)), std::invalid_argument);
  CHECK(spectrogram_shape(400).frames == 1);
}

TEST_CASE("spectrogram matches a direct DFT") {
  Rng rng(1);
  StereoChunk chunk = StereoChunk::silence(4000);
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    chunk.left[i] = rng.normal();
    chunk.right[i] = 0.3 * rng.normal();
  }
  const auto fast = spectrogram(chunk);
  const auto slow = naive_spectrogram(chunk);
  REQUIRE(fast.shape() == slow.shape());
  double worst = 0.0;
  for (std::size_t i = 0; i < fast.values().size(); ++i) {
    worst = std::max(worst, std::abs(fast.values()[i] - slow.values()[i]));
    CHECK(fast.values()[i] >= 0.0);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("sound synthesis") {
  const auto& b = bank();
  CHECK(b.classes(SoundSplit::Train).size() == 73);
  CHECK(b.classes(SoundSplit::Val).size() == 11);
  CHECK(b.classes(SoundSplit::Test).size() == 18);
  CHECK_THROWS_AS(synth_sound(b, 102, 0, 10, 16000), std::invalid_argument);
  CHECK_THROWS_AS(synth_sound(b, -1, 0, 10, 16000), std::invalid_argument);

  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const int id = static_cast<int>(rng.uniform_index(102));
    const std::int64_t t0 = static_cast<std::int64_t>(rng.uniform_index(1'000'000));
    const int rate = k % 2 ? 44100 : 16000;
    const auto a = synth_sound(b, id, t0, 3000, rate);
    CHECK(a == synth_sound(b, id, t0, 3000, rate));
    const auto first = synth_sound(b, id, t0, 1500, rate);
    const auto second = synth_sound(b, id, t0 + 1500, 1500, rate);
    double dev = 0.0;
    for (int i = 0; i < 1500; ++i) {
      dev = std::max(dev, std::abs(a[i] - first[i]));
      dev = std::max(dev, std::abs(a[1500 + i] - second[i]));
    }
    CHECK(dev < 1e-9);
    const auto full = synth_sound(b, id, t0, rate, rate);
    double power = 0.0;
    for (double v : full) power += v * v;
    CHECK(std::sqrt(power / rate) == doctest::Approx(1.0).epsilon(0.05));
  }
  for (int id = 0; id + 1 < 102; id += 7) {
    const auto a = synth_sound(b, id, 0, 16000, 16000);
    const auto c = synth_sound(b, id + 1, 0, 16000, 16000);
    CHECK(std::abs(correlation(a, c)) < 0.9);
  }
}

TEST_CASE("propagation gains") {
  const NavGraph open(load_map(".....\n.....\n....."));
  const AgentPose east{{2, 1}, Heading::East};
  auto p = propagate(open, {2, 1}, east);
  CHECK(p.total_gain == 1.0);
  CHECK(p.gain_left == doctest::Approx(std::sqrt(0.5)));
  CHECK(p.gain_right == doctest::Approx(std::sqrt(0.5)));
  // North is to the left of an east-facing listener.
  p = propagate(open, {2, 0}, east);
  CHECK(p.total_gain == 0.5);
  CHECK(p.gain_left == doctest::Approx(0.5));
  CHECK(p.gain_right == doctest::Approx(0.0));
  CHECK(p.bearing_deg == doctest::Approx(90.0));

  const NavGraph split(load_map("..#..\n..#.."));
  p = propagate(split, {4, 0}, {{0, 0}, Heading::East});
  CHECK(p.total_gain == 0.0);
  CHECK(p.gain_left == 0.0);
  CHECK_FALSE(p.geodesic_moves.has_value());
}

TEST_CASE("energy split identity over random placements") {
  Rng rng(3);
  const GridMap maps[] = {generate_map(1, 16, 16, MapStyle::Rooms),
                          generate_map(2, 16, 16, MapStyle::Maze),
                          generate_map(3, 12, 12, MapStyle::Open)};
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const NavGraph* graph = nullptr;
    static const NavGraph graphs[] = {NavGraph(maps[0]), NavGraph(maps[1]), NavGraph(maps[2])};
    graph = &graphs[k % 3];
    const auto& cells = graph->largest_component();
    const Cell s = cells[rng.uniform_index(cells.size())];
    const AgentPose l{cells[rng.uniform_index(cells.size())], heading_from_index(k % 4)};
    const auto p = propagate(*graph, s, l);
    const double g = p.total_gain;
    worst = std::max(worst, std::abs(p.gain_left * p.gain_left + p.gain_right * p.gain_right - g * g));
    CHECK(p.gain_left >= 0.0);
    CHECK(p.gain_right >= 0.0);
    CHECK(g == doctest::Approx(1.0 / (1.0 + *graph->distance(s, l.cell))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("attenuation is strictly monotone in geodesic distance") {
  const NavGraph corridor(load_map("##########\n#........#\n##########"));
  const AgentPose l{{1, 1}, Heading::East};
  double last = 2.0;
  for (int x = 1; x <= 8; ++x) {
    const auto p = propagate(corridor, {x, 1}, l);
    CHECK(p.total_gain < last);
    if (x > 1) CHECK(p.bearing_deg == 0.0);
    last = p.total_gain;
  }
}

TEST_CASE("mirror symmetry is exact") {
  Rng rng(4);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int half = 4;
    const auto map = mirrored_map(rng, half, 11);
    const NavGraph graph(map);
    const int axis = half;
    for (int k = 0; k < 40; ++k) {
      const Cell lc{static_cast<int>(rng.uniform_index(11)), axis};
      const Cell s{static_cast<int>(rng.uniform_index(11)), static_cast<int>(rng.uniform_index(2 * half + 1))};
      const Cell m{s.x, 2 * axis - s.y};
      if (map.blocked(lc) || map.blocked(s)) continue;
      for (const Heading h : {Heading::East, Heading::West}) {
        const auto a = propagate(graph, s, {lc, h});
        const auto b = propagate(graph, m, {lc, h});
        CHECK(a.total_gain == b.total_gain);
        CHECK(a.gain_left == b.gain_right);
        CHECK(a.gain_right == b.gain_left);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("binaural rendering and mixing") {
  Rng rng(5);
  std::vector<double> mono(257);
  for (double& v : mono) v = rng.normal();
  PropagationResult zero;
  const auto silent = render_binaural(mono, zero);
  for (std::size_t i = 0; i < mono.size(); ++i) CHECK((silent.left[i] == 0.0 && silent.right[i] == 0.0));

  PropagationResult hard_left;
  hard_left.gain_left = 1.0;
  auto r = render_binaural(mono, hard_left);
  CHECK(r.left == mono);
  for (double v : r.right) CHECK(v == 0.0);

  PropagationResult any;
  any.gain_left = 0.37;
  any.gain_right = 0.81;
  r = render_binaural(mono, any);
  for (std::size_t i = 0; i < mono.size(); ++i) {
    CHECK(r.left[i] == 0.37 * mono[i]);
    CHECK(r.right[i] == 0.81 * mono[i]);
  }

  std::vector<StereoChunk> chunks(3, StereoChunk::silence(mono.size()));
  for (auto& c : chunks) {
    for (std::size_t i = 0; i < mono.size(); ++i) {
      c.left[i] = rng.normal();
      c.right[i] = rng.normal();
    }
  }
  const std::vector<StereoChunk> single{chunks[0]};
  CHECK(mix(single).left == chunks[0].left);
  StereoChunk neg = chunks[0];
  for (double& v : neg.left) v = -v;
  for (double& v : neg.right) v = -v;
  const std::vector<StereoChunk> cancel{chunks[0], neg};
  for (double v : mix(cancel).left) CHECK(v == 0.0);

  const auto ref = mix(chunks);
  std::vector<int> order{0, 1, 2};
  while (std::next_permutation(order.begin(), order.end())) {
    const std::vector<StereoChunk> perm{chunks[order[0]], chunks[order[1]], chunks[order[2]]};
    const auto m = mix(perm);
    CHECK(m.left == ref.left);
    CHECK(m.right == ref.right);
  }
  const std::vector<StereoChunk> bad{StereoChunk::silence(3), StereoChunk::silence(4)};
  CHECK_THROWS_AS(mix(bad), std::invalid_argument);

  // Optional ITD delays the far ear only.
  PropagationResult leftish = any;
  leftish.bearing_deg = 90.0;
  const auto d = render_binaural(mono, leftish, 5);
  CHECK(d.left[0] == 0.37 * mono[0]);
  CHECK(d.right[4] == 0.0);
  CHECK(d.right[5] == 0.81 * mono[0]);
}

TEST_CASE("observation audio equals composition of the pipeline") {
  const auto& b = bank();
  const NavGraph graph(generate_map(6, 10, 10, MapStyle::Rooms));
  const auto& cells = graph.largest_component();
  const AgentPose listener{cells[3], Heading::North};

  const auto none = compute_observation_audio(b, graph, {}, listener, 0, 16000);
  for (double v : none.values()) CHECK(v == 0.0);

  const std::vector<SourceEmission> colocated{{5, listener.cell}};
  const auto same = compute_observation_audio(b, graph, colocated, listener, 0, 16000);
  for (int f = 0; f < same.freq_bins(); ++f) {
    for (int t = 0; t < same.frames(); ++t) CHECK(same.at(f, t, 0) == same.at(f, t, 1));
  }

  const std::vector<SourceEmission> two{{7, cells[10]}, {40, cells[cells.size() - 1]}};
  const std::int64_t t0 = 48000;
  const auto got = compute_observation_audio(b, graph, two, listener, t0, 16000);
  std::vector<StereoChunk> parts;
  for (const auto& e : two) {
    parts.push_back(render_binaural(synth_sound(b, e.class_id, t0, 16000, 16000),
                                    propagate(graph, e.cell, listener)));
  }
  CHECK(got == spectrogram(mix(parts)));
}

TEST_CASE("spectrogram dump round trip") {
  Rng rng(6);
  BinauralSpectrogram spec({65, 26});
  for (double& v : spec.values()) v = static_cast<float>(rng.uniform() * 4.0);
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "dynav_spec_test.bin";
  write_spectrogram_dump(spec, path);
  CHECK(std::filesystem::file_size(path) == 12 + 65 * 26 * 2 * 4);
  CHECK(read_spectrogram_dump(path) == spec);
  write_spectrogram_pgm(spec, dir / "dynav_spec_test.pgm");
  CHECK(std::filesystem::exists(dir / "dynav_spec_test.pgm"));
  std::filesystem::remove(path);
  std::filesystem::remove(dir / "dynav_spec_test.pgm");
}
