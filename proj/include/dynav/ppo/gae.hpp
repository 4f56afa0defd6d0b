#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dynav {

struct AdvantageEstimate {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

/// Generalised advantage estimation over one environment's sequence.
/// dones[t] marks that the episode ended with transition t; `bootstrap` is
/// V of the state after the last transition. Throws std::invalid_argument
/// on length mismatch.
AdvantageEstimate compute_gae(std::span<const double> rewards, std::span<const double> values,
                              std::span<const std::uint8_t> dones, double bootstrap, double gamma = 0.99,
                              double tau = 0.95);

/// Rescales to zero mean and unit variance (population std + 1e-8).
void normalize_advantages(std::span<double> advantages);

}  // namespace dynav
