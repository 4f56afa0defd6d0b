#include "dynav/bench/throughput.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace dynav {

namespace {

using Clock = std::chrono::steady_clock;

struct Slot {
  NavEnv env;
  Rng rng;
  nn::Tensor h;
  std::uint64_t next_episode;
};

std::int64_t decide(Slot& s, const PolicyNetwork* policy, int stride) {
  if (s.env.done()) {
    s.env.reset(s.next_episode);
    s.next_episode += static_cast<std::uint64_t>(stride);
    if (policy) s.h = policy->initial_state();
  }
  const auto mask = s.env.action_mask();
  int index = 0;
  if (policy) {
    const auto out = policy->forward(make_policy_input(s.env.observation(), policy->profile()), s.h);
    index = select_waypoint(out.logits, mask, s.rng, SelectMode::Sample, s.env.geometry()).index;
    s.h = out.h;
  } else {
    std::vector<int> allowed;
    for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
      if (mask[i]) allowed.push_back(i);
    }
    index = allowed[s.rng.uniform_index(allowed.size())];
  }
  return s.env.step_waypoint(index).sub_steps;
}

ThroughputRow run_mode(std::vector<Slot>& slots, const PolicyNetwork* policy, const ThroughputOptions& opts) {
  const int n = static_cast<int>(slots.size());
  auto run_for = [&](double seconds) {
    std::int64_t steps = 0;
    const auto t0 = Clock::now();
    double elapsed = 0.0;
    do {
      std::vector<std::int64_t> counts(n, 0);
#pragma omp parallel for schedule(static, 1)
      for (int e = 0; e < n; ++e) counts[e] = decide(slots[e], policy, n);
      for (auto c : counts) steps += c;
      elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    } while (elapsed < seconds);
    return std::pair{steps, elapsed};
  };
  if (opts.warmup > 0.0) run_for(opts.warmup);
  const auto [steps, elapsed] = run_for(opts.duration);
  ThroughputRow row;
  row.mode = policy ? "env+policy" : "env";
  row.num_envs = n;
  row.seconds = elapsed;
  row.low_level_steps = steps;
  row.steps_per_second = static_cast<double>(steps) / elapsed;
  row.per_env_steps_per_second = row.steps_per_second / n;
  return row;
}

}  // namespace

std::vector<ThroughputRow> throughput_bench(const EnvConfig& env, std::shared_ptr<const MapPool> maps,
                                            std::shared_ptr<const SoundBank> bank, const SeedStreams& seeds,
                                            const PolicyNetwork& policy, const ThroughputOptions& opts) {
  if (!(opts.duration > 0.0)) throw std::invalid_argument("throughput_bench: duration must be positive");
  if (opts.warmup < 0.0) throw std::invalid_argument("throughput_bench: warmup must be non-negative");
  if (opts.num_envs < 1) throw std::invalid_argument("throughput_bench: need at least one environment");
  std::vector<ThroughputRow> rows;
  for (const PolicyNetwork* p : {static_cast<const PolicyNetwork*>(nullptr), &policy}) {
    std::vector<Slot> slots;
    for (int e = 0; e < opts.num_envs; ++e) {
      slots.push_back({NavEnv(env, maps, bank, seeds), SeedStreams::rng(seeds.policy, e), policy.initial_state(),
                       static_cast<std::uint64_t>(e)});
    }
    rows.push_back(run_mode(slots, p, opts));
  }
  return rows;
}

std::string throughput_csv(const std::vector<ThroughputRow>& rows) {
  std::ostringstream out;
  out << "mode,num_envs,seconds,low_level_steps,steps_per_second,per_env_steps_per_second\n";
  for (const auto& r : rows) {
    out << r.mode << ',' << r.num_envs << ',' << r.seconds << ',' << r.low_level_steps << ','
        << r.steps_per_second << ',' << r.per_env_steps_per_second << '\n';
  }
  return out.str();
}

}  // namespace dynav
