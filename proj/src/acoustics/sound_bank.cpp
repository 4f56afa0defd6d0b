#include "dynav/acoustics/sound_bank.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "dynav/common/rng.hpp"

namespace dynav {

SoundSplit parse_sound_split(std::string_view name) {
  if (name == "train") return SoundSplit::Train;
  if (name == "val") return SoundSplit::Val;
  if (name == "test") return SoundSplit::Test;
  throw std::invalid_argument("unknown sound split: " + std::string(name));
}

std::string_view to_string(SoundSplit split) {
  switch (split) {
    case SoundSplit::Train: return "train";
    case SoundSplit::Val: return "val";
    case SoundSplit::Test: return "test";
  }
  return "?";
}

namespace {

SoundClass make_class(int id, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x736e64u, static_cast<std::uint64_t>(id)));
  SoundClass sc;
  sc.id = id;
  std::set<int> used;
  auto add = [&](int f, double weight) {
    if (!used.insert(f).second) return;
    sc.components.push_back({f, weight, 2.0 * std::numbers::pi * rng.uniform()});
  };
  const int n_tones = rng.uniform_int(3, 6);
  for (int k = 0; k < n_tones; ++k) {
    add(rng.uniform_int(150, 4000), 0.3 + rng.uniform());
  }
  const int band_lo = rng.uniform_int(200, 5000);
  const int band_hi = band_lo + rng.uniform_int(300, 2000);
  for (int k = 0; k < 24; ++k) add(rng.uniform_int(band_lo, band_hi), 0.08);

  // Scale so the mean power over one period is exactly 1 (RMS 1).
  double power = 0.0;
  for (const auto& t : sc.components) power += 0.5 * t.amplitude * t.amplitude;
  const double scale = 1.0 / std::sqrt(power);
  for (auto& t : sc.components) t.amplitude *= scale;
  return sc;
}

}  // namespace

SoundBank::SoundBank(std::uint64_t seed) {
  classes_.reserve(kNumSoundClasses);
  for (int id = 0; id < kNumSoundClasses; ++id) classes_.push_back(make_class(id, seed));
}

const SoundClass& SoundBank::sound_class(int id) const {
  if (id < 0 || id >= kNumSoundClasses) {
    throw std::invalid_argument("invalid sound class id " + std::to_string(id));
  }
  return classes_[id];
}

SoundSplit SoundBank::split_of(int id) const {
  sound_class(id);
  if (id < kNumTrainClasses) return SoundSplit::Train;
  if (id < kNumTrainClasses + kNumValClasses) return SoundSplit::Val;
  return SoundSplit::Test;
}

std::vector<int> SoundBank::classes(SoundSplit split) const {
  std::vector<int> out;
  for (int id = 0; id < kNumSoundClasses; ++id) {
    if (split_of(id) == split) out.push_back(id);
  }
  return out;
}

std::shared_ptr<const std::vector<double>> SoundBank::period(int class_id, int sample_rate) const {
  const std::int64_t key = static_cast<std::int64_t>(sample_rate) * kNumSoundClasses + class_id;
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const auto& sc = sound_class(class_id);
  auto table = std::make_shared<std::vector<double>>(sample_rate, 0.0);
  for (const auto& tone : sc.components) {
    // Integer phase reduction keeps the table exactly periodic.
    const std::int64_t f = tone.frequency_hz;
    for (int n = 0; n < sample_rate; ++n) {
      const std::int64_t cycles = (f * n) % sample_rate;
      (*table)[n] += tone.amplitude *
                     std::sin(2.0 * std::numbers::pi * static_cast<double>(cycles) / sample_rate +
                              tone.phase);
    }
  }
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(key, std::move(table)).first->second;
}

std::vector<double> SoundBank::synth(int class_id, std::int64_t t0, std::size_t n,
                                     int sample_rate) const {
  if (sample_rate < 1) throw std::invalid_argument("synth: sample rate must be positive");
  sound_class(class_id);
  const auto table = period(class_id, sample_rate);
  std::vector<double> out(n);
  std::int64_t idx = t0 % sample_rate;
  if (idx < 0) idx += sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (*table)[idx];
    if (++idx == sample_rate) idx = 0;
  }
  return out;
}

std::vector<double> synth_sound(const SoundBank& bank, int class_id, std::int64_t t0,
                                std::size_t n, int sample_rate) {
  return bank.synth(class_id, t0, n, sample_rate);
}

}  // namespace dynav
