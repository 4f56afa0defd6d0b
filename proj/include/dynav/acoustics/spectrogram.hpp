#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dynav/acoustics/propagation.hpp"

namespace dynav {

/// STFT framing: Hann window of 400 samples centred in a zero-padded
/// 512-point frame, hop 160, signal padded by n_fft/2 zeros on both sides
/// (centred frames), magnitude, every 4th bin and frame kept, then log1p.
struct SpectrogramParams {
  static constexpr int kWindow = 400;
  static constexpr int kFft = 512;
  static constexpr int kHop = 160;
  static constexpr int kDownsample = 4;
  static constexpr int kBins = kFft / 2 + 1;  // 257
};

struct SpectrogramShape {
  int freq_bins = 0;
  int frames = 0;
  bool operator==(const SpectrogramShape&) const = default;
};

/// Shape for a chunk of n samples; throws if n < kWindow.
SpectrogramShape spectrogram_shape(std::size_t n_samples);

/// F x T x 2 nonnegative log-magnitudes, row-major (f, t, channel);
/// channel 0 is the left ear.
class BinauralSpectrogram {
 public:
  BinauralSpectrogram() = default;
  explicit BinauralSpectrogram(SpectrogramShape shape);

  SpectrogramShape shape() const { return shape_; }
  int freq_bins() const { return shape_.freq_bins; }
  int frames() const { return shape_.frames; }

  double& at(int f, int t, int c) { return values_[(static_cast<std::size_t>(f) * shape_.frames + t) * 2 + c]; }
  double at(int f, int t, int c) const { return values_[(static_cast<std::size_t>(f) * shape_.frames + t) * 2 + c]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const BinauralSpectrogram&) const = default;

 private:
  SpectrogramShape shape_;
  std::vector<double> values_;
};

/// Periodic Hann window of length kWindow.
std::vector<double> hann_window();

BinauralSpectrogram spectrogram(const StereoChunk& chunk);

struct SourceEmission {
  int class_id = 0;
  Cell cell;
};

/// Renders and mixes every emission at listener time t0 (absolute sample
/// index), then computes the spectrogram. No emissions yield silence.
BinauralSpectrogram compute_observation_audio(const SoundBank& bank, const NavGraph& graph,
                                              std::span<const SourceEmission> sources,
                                              AgentPose listener, std::int64_t t0,
                                              int sample_rate, int itd_samples = 0);

/// Binary dump: three little-endian int32 dims (F, T, 2), then float32
/// values row-major (f, t, c).
void write_spectrogram_dump(const BinauralSpectrogram& spec, const std::filesystem::path& path);
BinauralSpectrogram read_spectrogram_dump(const std::filesystem::path& path);

/// 8-bit binary PGM: rows are frequency bins (low bins at the bottom),
/// left channel then right channel side by side.
void write_spectrogram_pgm(const BinauralSpectrogram& spec, const std::filesystem::path& path);

}  // namespace dynav
