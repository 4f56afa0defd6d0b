#include "dynav/bench/replay.hpp"

#include <sstream>

namespace dynav {

namespace {

constexpr int kCell = 24;

double centre(int v) { return (v + 0.5) * kCell; }

int draw_path(std::ostringstream& svg, const std::vector<Cell>& cells, const char* colour, double width) {
  int n = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i] == cells[i - 1]) continue;
    svg << "<line x1=\"" << centre(cells[i - 1].x) << "\" y1=\"" << centre(cells[i - 1].y) << "\" x2=\""
        << centre(cells[i].x) << "\" y2=\"" << centre(cells[i].y) << "\" stroke=\"" << colour
        << "\" stroke-width=\"" << width << "\"/>\n";
    ++n;
  }
  return n;
}

}  // namespace

std::string render_replay_svg(const EpisodeRecord& r, int max_steps, SvgSummary* summary) {
  if (!r.graph) throw std::invalid_argument("episode record without a map");
  const GridMap& map = r.graph->map();
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width() * kCell << "\" height=\""
      << map.height() * kCell << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.blocked({x, y})) {
        svg << "<rect x=\"" << x * kCell << "\" y=\"" << y * kCell << "\" width=\"" << kCell << "\" height=\""
            << kCell << "\" fill=\"#444\"/>\n";
      }
    }
  }

  std::vector<Cell> agent, source;
  for (std::size_t t = 0; t <= r.steps.size(); ++t) {
    agent.push_back(r.pose_at(t).cell);
    source.push_back(r.source_at(t));
  }
  const auto chase = oracle_chaser(*r.graph, r.start, source, max_steps);
  std::vector<Cell> oracle;
  for (const auto& p : chase.path) oracle.push_back(p.cell);

  SvgSummary s;
  s.oracle_segments = draw_path(svg, oracle, "green", 2);
  s.source_segments = draw_path(svg, source, "red", 3);
  s.agent_segments = draw_path(svg, agent, "blue", 3);
  const Cell a = agent.back(), src = source.back();
  svg << "<circle class=\"marker\" cx=\"" << centre(src.x) << "\" cy=\"" << centre(src.y) << "\" r=\""
      << kCell * 0.35 << "\" fill=\"red\"/>\n";
  svg << "<circle class=\"marker\" cx=\"" << centre(a.x) << "\" cy=\"" << centre(a.y) << "\" r=\""
      << kCell * 0.25 << "\" fill=\"blue\"/>\n";
  s.markers = 2;
  svg << "</svg>\n";
  if (summary) *summary = s;
  return svg.str();
}

}  // namespace dynav
