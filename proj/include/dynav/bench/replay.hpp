#pragma once

#include <string>
#include <vector>

#include "dynav/metrics/metrics.hpp"

namespace dynav {

/// Counts of the drawn elements, for callers that check the picture.
struct SvgSummary {
  int markers = 0;
  int agent_segments = 0;
  int source_segments = 0;
  int oracle_segments = 0;
};

/// Top-down picture of one episode: walls, the agent path (blue), the
/// source path (red) and the oracle chaser's path against the same source
/// trajectory (green). Each path is a chain of unit segments between
/// consecutive distinct cells; the agent and the source get one marker
/// each at their final cells.
std::string render_replay_svg(const EpisodeRecord& record, int max_steps, SvgSummary* summary = nullptr);

}  // namespace dynav
