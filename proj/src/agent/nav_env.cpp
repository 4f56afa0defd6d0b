#include "dynav/agent/nav_env.hpp"

#include <stdexcept>
#include <string>

namespace dynav {

TaskKind parse_task(std::string_view name) {
  if (name == "static") return TaskKind::Static;
  if (name == "dynamic") return TaskKind::Dynamic;
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "clean") return ScenarioKind::Clean;
  if (name == "complex") return ScenarioKind::Complex;
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(TaskKind t) { return t == TaskKind::Static ? "static" : "dynamic"; }
std::string_view to_string(ScenarioKind s) { return s == ScenarioKind::Clean ? "clean" : "complex"; }

MapPool make_map_pool(std::uint64_t map_seed, int count, int width, int height, MapStyle style) {
  if (count < 1) throw std::invalid_argument("map pool needs at least one map");
  MapPool pool;
  for (int i = 0; i < count; ++i) {
    pool.push_back(std::make_shared<const NavGraph>(
        generate_map(derive_seed(map_seed, 0, static_cast<std::uint64_t>(i)), width, height, style)));
  }
  return pool;
}

NavEnv::NavEnv(EnvConfig cfg, std::shared_ptr<const MapPool> maps, std::shared_ptr<const SoundBank> bank,
               SeedStreams seeds)
    : cfg_(std::move(cfg)), maps_(std::move(maps)), bank_(std::move(bank)), seeds_(seeds) {
  geometry_.size = cfg_.action_map_size;
  if (!maps_ || maps_->empty()) throw std::invalid_argument("NavEnv: empty map pool");
  if (!bank_) throw std::invalid_argument("NavEnv: no sound bank");
  if (cfg_.target_classes.empty()) throw std::invalid_argument("NavEnv: no target classes");
  if (cfg_.max_steps < 1) throw std::invalid_argument("NavEnv: max_steps must be positive");
  if (cfg_.max_source_distance < 0) throw std::invalid_argument("NavEnv: max_source_distance must be non-negative");
  if (cfg_.action_map_size < 3 || cfg_.action_map_size % 2 == 0) {
    throw std::invalid_argument("NavEnv: action_map_size must be odd and at least 3");
  }
  if (cfg_.training_pool.empty()) cfg_.training_pool = cfg_.target_classes;
}

const Observation& NavEnv::reset(std::uint64_t episode_index) {
  Rng layout = SeedStreams::rng(seeds_.layout, episode_index);
  scenario_rng_ = SeedStreams::rng(seeds_.scenario, episode_index);
  motion_rng_ = SeedStreams::rng(seeds_.motion, episode_index);
  augment_rng_ = SeedStreams::rng(seeds_.augmentation, episode_index);

  graph_ = (*maps_)[layout.uniform_index(maps_->size())];
  const auto& cells = graph_->largest_component();
  if (cells.size() < 2) throw std::runtime_error("NavEnv: map has fewer than two connected free cells");
  pose_.cell = cells[layout.uniform_index(cells.size())];
  pose_.heading = heading_from_index(static_cast<int>(layout.uniform_index(4)));
  const int target = cfg_.target_classes[layout.uniform_index(cfg_.target_classes.size())];
  Cell source = pose_.cell;
  if (cfg_.max_source_distance > 0) {
    std::vector<Cell> near;
    for (const Cell c : cells) {
      const int d = *graph_->distance(pose_.cell, c);
      if (c != pose_.cell && d <= cfg_.max_source_distance) near.push_back(c);
    }
    source = near[layout.uniform_index(near.size())];
  } else {
    source = sample_source_goal(*graph_, layout, pose_.cell, pose_.cell);
  }

  if (cfg_.scenario == ScenarioKind::Complex) {
    scenario_ = sample_episode_scenario(scenario_rng_, cfg_.training_pool, target, cfg_.knobs);
  } else {
    scenario_ = EpisodeScenario{};
    scenario_.target_class = target;
  }
  moving_ = cfg_.task == TaskKind::Dynamic || scenario_.dynamic_target;
  if (moving_) {
    motion_ = make_motion_model(*graph_, motion_rng_, source, pose_.cell, cfg_.move_probability);
  } else {
    motion_ = MotionModel{source, source, {}, 0.0};
  }

  record_ = EpisodeRecord{};
  record_.episode_id = episode_index;
  record_.seed = seeds_.run;
  record_.graph = graph_;
  record_.dynamic = moving_;
  record_.start = pose_;
  record_.source_start = source;
  done_ = false;

  obs_.gmap = GeometricMap(graph_->map().width(), graph_->map().height());
  obs_.depth = ray_cast_scan(graph_->map(), pose_, cfg_.n_rays, cfg_.fov_degrees, cfg_.max_range);
  update_geometric_map(obs_.gmap, pose_, obs_.depth);
  sources_ = compose_step_sources(scenario_, *graph_, scenario_rng_, motion_.current, cfg_.training_pool, cfg_.knobs);
  observe();
  return obs_;
}

void NavEnv::observe() {
  obs_.pose = pose_;
  obs_.step = steps();
  auto spec = compute_observation_audio(*bank_, *graph_, sources_.emissions, pose_,
                                        steps() * static_cast<std::int64_t>(cfg_.sample_rate), cfg_.sample_rate,
                                        cfg_.itd_samples);
  if (cfg_.scenario == ScenarioKind::Complex) {
    obs_.spectrogram = apply_augment(spec, cfg_.augment, augment_rng_, cfg_.augment_prob).spec;
  } else {
    obs_.spectrogram = std::move(spec);
  }
}

std::vector<std::uint8_t> NavEnv::action_mask() const { return waypoint_mask(graph_->map(), pose_, geometry_); }

double NavEnv::sub_step(LowLevelAction action) {
  const Cell goal = motion_.current;
  const Cell before = pose_.cell;
  const auto outcome = dynav::step_low_level(graph_->map(), pose_, action);
  const bool moved = outcome.pose.cell != before;
  pose_ = outcome.pose;
  const double r = compute_reward(*graph_, before, pose_.cell, goal, action, cfg_.reward);
  if (moved) ++record_.path_length;

  if (action == LowLevelAction::Stop) {
    record_.success = pose_.cell == goal;
    done_ = true;
  } else {
    obs_.depth = ray_cast_scan(graph_->map(), pose_, cfg_.n_rays, cfg_.fov_degrees, cfg_.max_range);
    update_geometric_map(obs_.gmap, pose_, obs_.depth);
    if (moving_) source_step(motion_, *graph_, motion_rng_, pose_.cell);
    sources_ = compose_step_sources(scenario_, *graph_, scenario_rng_, motion_.current, cfg_.training_pool,
                                    cfg_.knobs);
  }
  record_.steps.push_back({action, pose_, motion_.current, r});
  if (steps() >= cfg_.max_steps) done_ = true;
  return r;
}

WaypointOutcome NavEnv::step_low_level(LowLevelAction action) {
  if (done_) throw std::logic_error("NavEnv: step after episode end");
  WaypointOutcome out;
  out.reward = sub_step(action);
  out.sub_steps = 1;
  out.done = done_;
  out.success = record_.success;
  if (!done_) observe();
  return out;
}

WaypointOutcome NavEnv::step_to_cell(Cell target) {
  if (done_) throw std::logic_error("NavEnv: step after episode end");
  const auto plan = plan_actions(graph_->map(), pose_, target);
  WaypointOutcome out;
  for (const auto a : plan) {
    out.reward += sub_step(a);
    ++out.sub_steps;
    if (done_) break;
  }
  out.done = done_;
  out.success = record_.success;
  if (!done_) observe();
  return out;
}

WaypointOutcome NavEnv::step_waypoint(int index) {
  if (done_) throw std::logic_error("NavEnv: step after episode end");
  if (index == geometry_.center()) return step_low_level(LowLevelAction::Stop);
  const Cell target = geometry_.waypoint_cell(pose_, index);
  if (graph_->map().blocked(target) || !graph_->connected(pose_.cell, target)) {
    throw std::invalid_argument("NavEnv: waypoint is not traversable");
  }
  const auto cost = shortest_action_count(graph_->map(), pose_, target);
  if (!cost || *cost > geometry_.max_actions()) throw std::invalid_argument("NavEnv: waypoint exceeds the action budget");
  return step_to_cell(target);
}

}  // namespace dynav
