#include "dynav/acoustics/spectrogram.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "dynav/common/binary_io.hpp"

namespace dynav {

namespace {

using P = SpectrogramParams;

// One shared r2c plan; fftw_execute_dft_r2c on it is thread-safe, plan
// creation is not, hence the call_once.
fftw_plan shared_plan() {
  static std::once_flag once;
  static fftw_plan plan = nullptr;
  std::call_once(once, [] {
    double* in = fftw_alloc_real(P::kFft);
    fftw_complex* out = fftw_alloc_complex(P::kBins);
    plan = fftw_plan_dft_r2c_1d(P::kFft, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
  });
  return plan;
}

int downsampled(int n) { return (n + P::kDownsample - 1) / P::kDownsample; }

}  // namespace

SpectrogramShape spectrogram_shape(std::size_t n_samples) {
  if (n_samples < static_cast<std::size_t>(P::kWindow)) {
    throw std::invalid_argument("spectrogram: chunk shorter than one window");
  }
  const int stft_frames = 1 + static_cast<int>(n_samples / P::kHop);
  return {downsampled(P::kBins), downsampled(stft_frames)};
}

BinauralSpectrogram::BinauralSpectrogram(SpectrogramShape shape)
    : shape_(shape), values_(static_cast<std::size_t>(shape.freq_bins) * shape.frames * 2, 0.0) {}

std::vector<double> hann_window() {
  std::vector<double> w(P::kWindow);
  for (int k = 0; k < P::kWindow; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / P::kWindow);
  }
  return w;
}

BinauralSpectrogram spectrogram(const StereoChunk& chunk) {
  if (chunk.left.size() != chunk.right.size()) {
    throw std::invalid_argument("spectrogram: channel length mismatch");
  }
  const auto shape = spectrogram_shape(chunk.size());
  BinauralSpectrogram out(shape);
  static const std::vector<double> window = hann_window();
  const fftw_plan plan = shared_plan();

  const auto n = static_cast<std::ptrdiff_t>(chunk.size());
  constexpr std::ptrdiff_t kPad = P::kFft / 2;
  constexpr std::ptrdiff_t kWindowOffset = (P::kFft - P::kWindow) / 2;
  double frame[P::kFft];
  fftw_complex spectrum[P::kBins];

  for (int c = 0; c < 2; ++c) {
    const auto& signal = c == 0 ? chunk.left : chunk.right;
    for (int t = 0; t < shape.frames; ++t) {
      const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t) * P::kDownsample * P::kHop - kPad;
      std::fill(std::begin(frame), std::end(frame), 0.0);
      for (std::ptrdiff_t k = 0; k < P::kWindow; ++k) {
        const std::ptrdiff_t idx = start + kWindowOffset + k;
        if (idx >= 0 && idx < n) frame[kWindowOffset + k] = signal[idx] * window[k];
      }
      fftw_execute_dft_r2c(plan, frame, spectrum);
      for (int f = 0; f < shape.freq_bins; ++f) {
        const auto& z = spectrum[f * P::kDownsample];
        out.at(f, t, c) = std::log1p(std::hypot(z[0], z[1]));
      }
    }
  }
  return out;
}

BinauralSpectrogram compute_observation_audio(const SoundBank& bank, const NavGraph& graph,
                                              std::span<const SourceEmission> sources,
                                              AgentPose listener, std::int64_t t0,
                                              int sample_rate, int itd_samples) {
  const auto n = static_cast<std::size_t>(sample_rate);
  if (sources.empty()) return spectrogram(StereoChunk::silence(n));
  std::vector<StereoChunk> rendered;
  rendered.reserve(sources.size());
  for (const auto& s : sources) {
    const auto mono = synth_sound(bank, s.class_id, t0, n, sample_rate);
    rendered.push_back(render_binaural(mono, propagate(graph, s.cell, listener), itd_samples));
  }
  return spectrogram(mix(rendered));
}

void write_spectrogram_dump(const BinauralSpectrogram& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  io::write_i32(out, spec.freq_bins());
  io::write_i32(out, spec.frames());
  io::write_i32(out, 2);
  for (double v : spec.values()) io::write_f32(out, static_cast<float>(v));
}

BinauralSpectrogram read_spectrogram_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const int f = io::read_i32(in);
  const int t = io::read_i32(in);
  const int c = io::read_i32(in);
  if (f <= 0 || t <= 0 || c != 2) throw std::runtime_error("spectrogram dump: bad header");
  BinauralSpectrogram spec({f, t});
  for (double& v : spec.values()) v = io::read_f32(in);
  return spec;
}

void write_spectrogram_pgm(const BinauralSpectrogram& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const int width = spec.frames() * 2 + 1;
  const int height = spec.freq_bins();
  double peak = 0.0;
  for (double v : spec.values()) peak = std::max(peak, v);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  for (int row = 0; row < height; ++row) {
    const int f = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      unsigned char px = 255;  // separator column
      if (x != spec.frames()) {
        const int c = x < spec.frames() ? 0 : 1;
        const int t = c == 0 ? x : x - spec.frames() - 1;
        const double v = peak > 0 ? spec.at(f, t, c) / peak : 0.0;
        px = static_cast<unsigned char>(std::lround(255.0 * v));
      }
      out.put(static_cast<char>(px));
    }
  }
}

}  // namespace dynav
