#include "dynav/bench/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dynav {

SoundSet parse_sound_set(std::string_view name) {
  if (name == "heard") return SoundSet::Heard;
  if (name == "unheard") return SoundSet::Unheard;
  throw ConfigError("unknown sound set: " + std::string(name));
}

std::string_view to_string(SoundSet s) { return s == SoundSet::Heard ? "heard" : "unheard"; }

SelectMode parse_select_mode(std::string_view name) {
  if (name == "sample") return SelectMode::Sample;
  if (name == "argmax") return SelectMode::Argmax;
  throw ConfigError("unknown eval mode: " + std::string(name));
}

std::string_view to_string(SelectMode m) { return m == SelectMode::Sample ? "sample" : "argmax"; }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(v) + "'");
}

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

template <typename T>
void check_range(std::string_view key, T v, T lo, T hi) {
  if (v < lo || v > hi) {
    std::ostringstream os;
    os << key << " = " << v << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(os.str());
  }
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field int_field(std::string key, T RunConfig::*m, T lo, T hi) {
  return {key,
          [=](RunConfig& c, std::string_view v) {
            const T x = parse_number<T>(key, v);
            check_range<T>(key, x, lo, hi);
            c.*m = x;
          },
          [=](const RunConfig& c) { return std::to_string(c.*m); }};
}

Field real_field(std::string key, double RunConfig::*m, double lo, double hi) {
  return {key,
          [=](RunConfig& c, std::string_view v) {
            const double x = parse_number<double>(key, v);
            check_range(key, x, lo, hi);
            c.*m = x;
          },
          [=](const RunConfig& c) { return format_double(c.*m); }};
}

Field bool_field(std::string key, bool RunConfig::*m) {
  return {key, [=](RunConfig& c, std::string_view v) { c.*m = parse_bool(key, v); },
          [=](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

template <typename E, typename Parse>
Field enum_field(std::string key, E RunConfig::*m, Parse parse) {
  return {key,
          [=](RunConfig& c, std::string_view v) {
            try {
              c.*m = parse(v);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(key + ": " + e.what());
            }
          },
          [=](const RunConfig& c) { return std::string(to_string(c.*m)); }};
}

const std::vector<Field>& fields() {
  using C = RunConfig;
  constexpr std::int64_t big = std::int64_t{1} << 40;
  static const std::vector<Field> table = {
      int_field<std::uint64_t>("seed", &C::seed, 0, UINT64_MAX),
      {"out", [](C& c, std::string_view v) {
         if (v.empty()) throw ConfigError("out must not be empty");
         c.out = std::string(v);
       },
       [](const C& c) { return c.out; }},
      int_field("map_width", &C::map_width, 5, 256),
      int_field("map_height", &C::map_height, 5, 256),
      enum_field("map_style", &C::map_style, [](std::string_view v) { return parse_map_style(v); }),
      int_field("map_count", &C::map_count, 1, 100000),
      {"profile", [](C& c, std::string_view v) {
         const auto names = profile_names();
         if (std::find(names.begin(), names.end(), v) == names.end()) {
           throw ConfigError("unknown profile: " + std::string(v));
         }
         c.profile = std::string(v);
       },
       [](const C& c) { return c.profile; }},
      int_field("view_size", &C::view_size, 4, 512),
      {"action_map_size", [](C& c, std::string_view v) {
         const int k = parse_number<int>("action_map_size", v);
         if (k != 3 && k != 5 && k != 9) throw ConfigError("action_map_size must be 3, 5 or 9");
         c.action_map_size = k;
       },
       [](const C& c) { return std::to_string(c.action_map_size); }},
      int_field("hidden_size", &C::hidden_size, 1, 4096),
      bool_field("aux_decoder", &C::aux_decoder),
      bool_field("continuous_actions", &C::continuous_actions),
      int_field("n_rays", &C::n_rays, 1, 4096),
      real_field("fov_degrees", &C::fov_degrees, 1.0, 360.0),
      real_field("max_range", &C::max_range, 0.5, 1e4),
      int_field("max_steps", &C::max_steps, 1, 1000000),
      int_field("max_source_distance", &C::max_source_distance, 0, 100000),
      enum_field("task", &C::task, [](std::string_view v) { return parse_task(v); }),
      real_field("move_probability", &C::move_probability, 0.0, 1.0),
      enum_field("scenario", &C::scenario, [](std::string_view v) { return parse_scenario(v); }),
      real_field("second_source_prob", &C::second_source_prob, 0.0, 1.0),
      real_field("distractor_prob", &C::distractor_prob, 0.0, 1.0),
      real_field("distractor_step_prob", &C::distractor_step_prob, 0.0, 1.0),
      real_field("dynamic_target_prob", &C::dynamic_target_prob, 0.0, 1.0),
      real_field("augment_prob", &C::augment_prob, 0.0, 1.0),
      int_field("freq_mask_F", &C::freq_mask_F, 0, 257),
      int_field("time_mask_T", &C::time_mask_T, 0, 1000),
      int_field("itd_samples", &C::itd_samples, 0, 4096),
      real_field("reward_success", &C::reward_success, 0.0, 1e6),
      real_field("reward_progress", &C::reward_progress, 0.0, 1e6),
      real_field("reward_time_penalty", &C::reward_time_penalty, 0.0, 1e6),
      enum_field("sounds", &C::sounds, [](std::string_view v) { return parse_sound_set(v); }),
      int_field("train_classes", &C::train_classes, 0, 73),
      int_field("num_envs", &C::num_envs, 1, 256),
      int_field("n_steps", &C::n_steps, 1, 100000),
      int_field("epochs", &C::epochs, 1, 1000),
      int_field("minibatches", &C::minibatches, 1, 1),
      real_field("lr", &C::lr, 1e-12, 1.0),
      real_field("gamma", &C::gamma, 0.0, 1.0),
      real_field("tau", &C::tau, 0.0, 1.0),
      real_field("clip_param", &C::clip_param, 1e-6, 1.0),
      real_field("value_coef", &C::value_coef, 0.0, 1e3),
      real_field("entropy_coef", &C::entropy_coef, 0.0, 1e3),
      real_field("max_grad_norm", &C::max_grad_norm, 1e-9, 1e9),
      bool_field("linear_lr_decay", &C::linear_lr_decay),
      bool_field("linear_clip_decay", &C::linear_clip_decay),
      bool_field("normalize_advantages", &C::normalize_advantages),
      real_field("aux_weight", &C::aux_weight, 0.0, 1e3),
      real_field("adam_eps", &C::adam_eps, 1e-16, 1.0),
      int_field("updates", &C::updates, 1, 10000000),
      int_field<std::int64_t>("step_budget", &C::step_budget, 0, big),
      int_field("checkpoint_every", &C::checkpoint_every, 0, 10000000),
      int_field("eval_episodes", &C::eval_episodes, 1, 10000000),
      enum_field("eval_mode", &C::eval_mode, [](std::string_view v) { return parse_select_mode(v); }),
      int_field<std::uint64_t>("eval_offset", &C::eval_offset, 0, UINT64_MAX / 2),
      int_field("eval_envs", &C::eval_envs, 1, 256),
      real_field("bench_duration", &C::bench_duration, 1e-3, 3600.0),
      real_field("bench_warmup", &C::bench_warmup, 0.0, 3600.0),
  };
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key: " + std::string(key));
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

void RunConfig::set(std::string_view key, std::string_view value) { field(key).set(*this, value); }

void RunConfig::validate() const {
  if (step_budget > 0 && step_budget < n_steps) throw ConfigError("step_budget smaller than one rollout");
  if (continuous_actions) throw ConfigError("continuous_actions is not supported by the waypoint trainer");
  try {
    const auto p = network_profile(*this);
    (void)profile_shapes(p);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("network profile does not fit: ") + e.what());
  }
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(*this) + "\n";
  return out;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  RunConfig cfg = std::move(base);
  std::set<std::string> seen;
  auto assign = [&](const std::string& key, const std::string& value) {
    if (!seen.insert(key).second) throw ConfigError("duplicate config key: " + key);
    cfg.set(key, value);
  };
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    for (const auto& [key, v] : j.items()) {
      if (v.is_string()) {
        assign(key, v.get<std::string>());
      } else if (v.is_boolean()) {
        assign(key, v.get<bool>() ? "true" : "false");
      } else if (v.is_number_integer() || v.is_number_unsigned()) {
        assign(key, v.dump());
      } else if (v.is_number_float()) {
        assign(key, format_double(v.get<double>()));
      } else {
        throw ConfigError("config value for " + key + " must be a scalar");
      }
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string value = trim(std::string_view(t).substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      assign(key, value);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::vector<int> training_classes(const RunConfig& cfg, const SoundBank& bank) {
  auto all = bank.classes(SoundSplit::Train);
  if (cfg.train_classes > 0) all.resize(std::min<std::size_t>(all.size(), cfg.train_classes));
  return all;
}

std::vector<int> target_classes(const RunConfig& cfg, const SoundBank& bank) {
  return cfg.sounds == SoundSet::Heard ? training_classes(cfg, bank) : bank.classes(SoundSplit::Test);
}

NetworkProfile network_profile(const RunConfig& cfg) {
  NetworkProfile p;
  try {
    p = make_profile(cfg.profile, cfg.view_size, cfg.view_size, cfg.action_map_size);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.hidden_size = cfg.hidden_size;
  p.n_rays = cfg.n_rays;
  p.aux_decoder = cfg.aux_decoder;
  return p;
}

EnvConfig env_config(const RunConfig& cfg, const SoundBank& bank) {
  EnvConfig e;
  e.sample_rate = network_profile(cfg).sample_rate;
  e.n_rays = cfg.n_rays;
  e.fov_degrees = cfg.fov_degrees;
  e.max_range = cfg.max_range;
  e.action_map_size = cfg.action_map_size;
  e.max_steps = cfg.max_steps;
  e.max_source_distance = cfg.max_source_distance;
  e.task = cfg.task;
  e.move_probability = cfg.move_probability;
  e.scenario = cfg.scenario;
  e.knobs.second_source_prob = cfg.second_source_prob;
  e.knobs.distractor_prob = cfg.distractor_prob;
  e.knobs.distractor_step_prob = cfg.distractor_step_prob;
  e.knobs.dynamic_target_prob = cfg.dynamic_target_prob;
  e.augment.freq_mask_F = cfg.freq_mask_F;
  e.augment.time_mask_T = cfg.time_mask_T;
  e.augment_prob = cfg.augment_prob;
  e.target_classes = target_classes(cfg, bank);
  e.training_pool = training_classes(cfg, bank);
  e.itd_samples = cfg.itd_samples;
  e.reward = {cfg.reward_success, cfg.reward_progress, cfg.reward_time_penalty};
  return e;
}

PpoConfig ppo_config(const RunConfig& cfg) {
  PpoConfig p;
  p.num_envs = cfg.num_envs;
  p.n_steps = cfg.n_steps;
  p.epochs = cfg.epochs;
  p.minibatches = cfg.minibatches;
  p.lr = cfg.lr;
  p.gamma = cfg.gamma;
  p.tau = cfg.tau;
  p.coef = {cfg.clip_param, cfg.value_coef, cfg.entropy_coef};
  p.max_grad_norm = cfg.max_grad_norm;
  p.linear_lr_decay = cfg.linear_lr_decay;
  p.linear_clip_decay = cfg.linear_clip_decay;
  p.normalize_advantages = cfg.normalize_advantages;
  p.aux_weight = cfg.aux_weight;
  p.adam.eps = cfg.adam_eps;
  return p;
}

}  // namespace dynav
