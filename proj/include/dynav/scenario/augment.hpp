#pragma once

#include <string_view>

#include "dynav/acoustics/spectrogram.hpp"
#include "dynav/common/rng.hpp"

namespace dynav {

/// Mask parameters: F bounds the masked frequency band height, T the masked
/// time span width.
struct AugmentSpec {
  int freq_mask_F = 12;
  int time_mask_T = 12;
};

enum class AugmentMode { None, Time, Frequency, Both };

std::string_view to_string(AugmentMode mode);

/// Zeroes f ~ U{0..F} consecutive frequency rows starting at
/// f0 ~ U{0..F_bins - f}, identically on both channels.
/// Throws std::invalid_argument unless 0 <= F <= freq_bins.
BinauralSpectrogram freq_mask(const BinauralSpectrogram& spec, int F, Rng& rng);

/// Column analogue of freq_mask over time frames.
BinauralSpectrogram time_mask(const BinauralSpectrogram& spec, int T, Rng& rng);

struct AugmentResult {
  BinauralSpectrogram spec;
  AugmentMode mode = AugmentMode::None;
};

/// With probability 1 - augment_prob no augmentation; otherwise one of
/// {time, frequency, both} uniformly. Both applies time then frequency.
AugmentResult apply_augment(const BinauralSpectrogram& spec, const AugmentSpec& aug, Rng& rng,
                            double augment_prob = 0.5);

}  // namespace dynav
