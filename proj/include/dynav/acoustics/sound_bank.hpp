#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dynav {

enum class SoundSplit { Train, Val, Test };

SoundSplit parse_sound_split(std::string_view name);
std::string_view to_string(SoundSplit split);

inline constexpr int kNumSoundClasses = 102;
inline constexpr int kNumTrainClasses = 73;
inline constexpr int kNumValClasses = 11;
inline constexpr int kNumTestClasses = 18;

struct Tone {
  int frequency_hz = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Parameters of one synthetic sound class: a few dominant tones plus a
/// band-limited noise floor made of many weak components. Every component
/// has an integer frequency, so each class waveform repeats exactly once
/// per second at any integer sample rate.
struct SoundClass {
  int id = 0;
  std::vector<Tone> components;
};

/// 102 deterministic synthetic sound classes split 73/11/18 by index.
class SoundBank {
 public:
  explicit SoundBank(std::uint64_t seed = 0x50554e44ULL);

  const SoundClass& sound_class(int id) const;
  SoundSplit split_of(int id) const;
  std::vector<int> classes(SoundSplit split) const;

  /// n samples starting at absolute sample index t0. Throws
  /// std::invalid_argument for an unknown class or sample rate < 1.
  std::vector<double> synth(int class_id, std::int64_t t0, std::size_t n, int sample_rate) const;

 private:
  std::shared_ptr<const std::vector<double>> period(int class_id, int sample_rate) const;

  std::vector<SoundClass> classes_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::int64_t, std::shared_ptr<const std::vector<double>>> cache_;
};

/// Mono chunk of class `class_id`; phase-continuous across consecutive calls.
std::vector<double> synth_sound(const SoundBank& bank, int class_id, std::int64_t t0,
                                std::size_t n, int sample_rate);

}  // namespace dynav
