#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynav/metrics/metrics.hpp"

namespace dynav {

class EmptyLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON object per line:
///   {"dynamic":b,"episode":u64,"map":"<map file text>","path_length":n,
///    "seed":u64,"source_start":[x,y],"start":[x,y,heading],
///    "steps":[["F"|"L"|"R"|"S",x,y,heading,source_x,source_y,reward],...],
///    "success":b}
/// Keys are written in sorted order and rewards with shortest round-trip
/// formatting, so equal records always serialise to equal bytes.
std::string episode_to_json_line(const EpisodeRecord& record);
/// Maps are shared between records with identical map text.
std::vector<EpisodeRecord> parse_trajectory_log(std::istream& in);

void write_trajectory_log(const std::filesystem::path& path, const std::vector<EpisodeRecord>& records);
/// Throws EmptyLogError when the file holds no record.
std::vector<EpisodeRecord> read_trajectory_log(const std::filesystem::path& path);

}  // namespace dynav
