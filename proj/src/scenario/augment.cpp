#include "dynav/scenario/augment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynav {

std::string_view to_string(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::None: return "none";
    case AugmentMode::Time: return "time";
    case AugmentMode::Frequency: return "frequency";
    case AugmentMode::Both: return "both";
  }
  return "?";
}

BinauralSpectrogram freq_mask(const BinauralSpectrogram& spec, int F, Rng& rng) {
  const int bins = spec.freq_bins();
  if (F < 0 || F > bins) {
    throw std::invalid_argument("freq_mask: F=" + std::to_string(F) + " outside [0, " +
                                std::to_string(bins) + "]");
  }
  BinauralSpectrogram out = spec;
  const int f = rng.uniform_int(0, F);
  const int f0 = rng.uniform_int(0, bins - f);
  for (int r = f0; r < f0 + f; ++r) {
    for (int t = 0; t < spec.frames(); ++t) {
      out.at(r, t, 0) = 0.0;
      out.at(r, t, 1) = 0.0;
    }
  }
  return out;
}

BinauralSpectrogram time_mask(const BinauralSpectrogram& spec, int T, Rng& rng) {
  const int frames = spec.frames();
  if (T < 0 || T > frames) {
    throw std::invalid_argument("time_mask: T=" + std::to_string(T) + " outside [0, " +
                                std::to_string(frames) + "]");
  }
  BinauralSpectrogram out = spec;
  const int t = rng.uniform_int(0, T);
  const int t0 = rng.uniform_int(0, frames - t);
  for (int f = 0; f < spec.freq_bins(); ++f) {
    for (int c = t0; c < t0 + t; ++c) {
      out.at(f, c, 0) = 0.0;
      out.at(f, c, 1) = 0.0;
    }
  }
  return out;
}

AugmentResult apply_augment(const BinauralSpectrogram& spec, const AugmentSpec& aug, Rng& rng,
                            double augment_prob) {
  if (!rng.bernoulli(augment_prob)) return {spec, AugmentMode::None};
  // T is clamped to the spectrogram width: the 44.1 kHz mask parameter
  // exceeds the 16 kHz spectrogram's 26 frames.
  const int T = std::min(aug.time_mask_T, spec.frames());
  const int F = std::min(aug.freq_mask_F, spec.freq_bins());
  switch (rng.uniform_index(3)) {
    case 0: return {time_mask(spec, T, rng), AugmentMode::Time};
    case 1: return {freq_mask(spec, F, rng), AugmentMode::Frequency};
    default: return {freq_mask(time_mask(spec, T, rng), F, rng), AugmentMode::Both};
  }
}

}  // namespace dynav
