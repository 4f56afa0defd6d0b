#include "dynav/bench/trajectory_log.hpp"

#include <fstream>
#include <map>
#include <memory>

#include <json.hpp>

namespace dynav {

using nlohmann::json;

std::string episode_to_json_line(const EpisodeRecord& r) {
  if (!r.graph) throw std::invalid_argument("episode record without a map");
  json j;
  j["episode"] = r.episode_id;
  j["seed"] = r.seed;
  j["dynamic"] = r.dynamic;
  j["success"] = r.success;
  j["path_length"] = r.path_length;
  j["map"] = map_file_text(r.graph->map());
  j["start"] = {r.start.cell.x, r.start.cell.y, static_cast<int>(r.start.heading)};
  j["source_start"] = {r.source_start.x, r.source_start.y};
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({std::string(1, action_code(s.action)), s.pose.cell.x, s.pose.cell.y,
                     static_cast<int>(s.pose.heading), s.source.x, s.source.y, s.reward});
  }
  j["steps"] = std::move(steps);
  return j.dump();
}

namespace {

Heading heading_of(const json& v) {
  const int h = v.get<int>();
  if (h < 0 || h > 3) throw std::runtime_error("trajectory log: heading out of range");
  return static_cast<Heading>(h);
}

}  // namespace

std::vector<EpisodeRecord> parse_trajectory_log(std::istream& in) {
  std::vector<EpisodeRecord> out;
  std::map<std::string, std::shared_ptr<const NavGraph>> graphs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      EpisodeRecord r;
      r.episode_id = j.at("episode").get<std::uint64_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.dynamic = j.at("dynamic").get<bool>();
      r.success = j.at("success").get<bool>();
      r.path_length = j.at("path_length").get<int>();
      const auto text = j.at("map").get<std::string>();
      auto& g = graphs[text];
      if (!g) {
        const auto nl = text.find('\n');
        if (nl == std::string::npos || text.rfind("resolution=", 0) != 0) {
          throw std::runtime_error("map text lacks a resolution header");
        }
        g = std::make_shared<const NavGraph>(load_map(text.substr(nl + 1), std::stod(text.substr(11, nl - 11))));
      }
      r.graph = g;
      const auto& st = j.at("start");
      r.start = {{st.at(0).get<int>(), st.at(1).get<int>()}, heading_of(st.at(2))};
      const auto& ss = j.at("source_start");
      r.source_start = {ss.at(0).get<int>(), ss.at(1).get<int>()};
      for (const auto& s : j.at("steps")) {
        const auto code = s.at(0).get<std::string>();
        if (code.size() != 1) throw std::runtime_error("bad action code");
        StepRecord step;
        step.action = action_from_code(code[0]);
        step.pose = {{s.at(1).get<int>(), s.at(2).get<int>()}, heading_of(s.at(3))};
        step.source = {s.at(4).get<int>(), s.at(5).get<int>()};
        step.reward = s.at(6).get<double>();
        r.steps.push_back(step);
      }
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("trajectory log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_trajectory_log(const std::filesystem::path& path, const std::vector<EpisodeRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) out << episode_to_json_line(r) << '\n';
}

std::vector<EpisodeRecord> read_trajectory_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto records = parse_trajectory_log(in);
  if (records.empty()) throw EmptyLogError("trajectory log is empty: " + path.string());
  return records;
}

}  // namespace dynav
