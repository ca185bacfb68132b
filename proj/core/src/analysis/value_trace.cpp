#include "ors/analysis/value_trace.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "ors/common/parallel.hpp"
#include "ors/common/stats.hpp"

namespace ors::analysis {

std::string to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::sparse:
      return "sparse";
    case RewardMode::ors:
      return "ors";
    case RewardMode::raw_rw:
      return "raw_rw";
  }
  return "unknown";
}

RewardMode parse_reward_mode(const std::string& name) {
  if (name == "sparse") return RewardMode::sparse;
  if (name == "ors") return RewardMode::ors;
  if (name == "raw_rw") return RewardMode::raw_rw;
  throw std::invalid_argument("unknown reward mode '" + name + "' (expected sparse, ors, raw_rw)");
}

ExpertTrajectory shortest_path_trajectory(const envs::DeterministicMdp& mdp, const envs::LayerDecomposition& layers,
                                          int start) {
  if (!layers.reachable(start)) throw std::invalid_argument("start state cannot reach the goal");
  ExpertTrajectory out;
  out.goal = layers.goal;
  int s = start;
  out.states.push_back(s);
  while (s != layers.goal) {
    const int a = layers.shortest_actions(mdp, s).front();
    out.actions.push_back(a);
    s = mdp.successor(s, a);
    out.states.push_back(s);
  }
  return out;
}

NoisyValueTrace noisy_value_trace(const ExpertTrajectory& trajectory, const RewardFn& reward_fn, RewardMode mode,
                                  double gamma, double sigma, const std::vector<double>& z) {
  const auto& xs = trajectory.states;
  if (xs.empty() || xs.back() != trajectory.goal) throw std::invalid_argument("trajectory must end at its goal");
  if (trajectory.actions.size() + 1 != xs.size()) throw std::invalid_argument("trajectory needs one action per step");
  if (z.size() < xs.size()) throw std::invalid_argument("need one noise draw per state");
  const std::size_t len = xs.size();
  NoisyValueTrace trace;
  trace.mode = mode;
  trace.sigma = sigma;
  trace.values.assign(len, 0.0);
  const int g = trajectory.goal;
  if (mode == RewardMode::raw_rw) {
    for (std::size_t t = 0; t + 1 < len; ++t)
      trace.values[t] = reward_fn(xs[t], trajectory.actions[t], g) * (1.0 + sigma * z[t]);
    return trace;
  }
  for (std::size_t t = len - 1; t-- > 0;) {
    const double r = mode == RewardMode::sparse ? (xs[t] != g ? -1.0 : 0.0) : reward_fn(xs[t], trajectory.actions[t], g);
    const double next = trace.values[t + 1];
    trace.values[t] = r + gamma * (next + sigma * z[t] * next);
  }
  return trace;
}

NoisyValueTrace noisy_value_trace(const ExpertTrajectory& trajectory, const RewardFn& reward_fn, RewardMode mode,
                                  double gamma, double sigma, Rng& rng) {
  std::vector<double> z(trajectory.states.size());
  for (auto& v : z) v = rng.normal();
  return noisy_value_trace(trajectory, reward_fn, mode, gamma, sigma, z);
}

double delta_v(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("delta_V needs at least two values");
  std::size_t drops = 0;
  for (std::size_t t = 0; t + 1 < values.size(); ++t) drops += values[t + 1] < values[t];
  return static_cast<double>(drops) / static_cast<double>(values.size() - 1);
}

double delta_v(const NoisyValueTrace& trace) { return delta_v(trace.values); }

std::vector<SweepRow> sweep_sigma(const std::vector<ExpertTrajectory>& trajectories, const RewardFn& reward_fn,
                                  const std::vector<RewardMode>& modes, const std::vector<double>& sigmas,
                                  int seeds, double gamma, std::uint64_t base_seed) {
  if (trajectories.empty()) throw std::invalid_argument("sweep needs at least one trajectory");
  if (seeds < 1) throw std::invalid_argument("sweep needs at least one seed");
  const std::size_t cells = modes.size() * sigmas.size();
  // per_seed[cell][seed] = mean delta_V over trajectories.
  std::vector<std::vector<double>> per_seed(cells, std::vector<double>(static_cast<std::size_t>(seeds)));
  const Rng root(base_seed);
  parallel_for(static_cast<std::size_t>(seeds), [&](std::size_t k) {
    const Rng seed_rng = root.split(static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      Rng traj_rng = seed_rng.split(static_cast<std::uint64_t>(i));
      std::vector<double> z(trajectories[i].states.size());
      for (auto& v : z) v = traj_rng.normal();
      for (std::size_t m = 0; m < modes.size(); ++m)
        for (std::size_t j = 0; j < sigmas.size(); ++j) {
          const auto trace = noisy_value_trace(trajectories[i], reward_fn, modes[m], gamma, sigmas[j], z);
          per_seed[m * sigmas.size() + j][k] += delta_v(trace) / static_cast<double>(trajectories.size());
        }
    }
  });
  std::vector<SweepRow> rows;
  for (std::size_t m = 0; m < modes.size(); ++m)
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const auto stats = mean_and_se(per_seed[m * sigmas.size() + j]);
      rows.push_back({modes[m], sigmas[j], stats.mean, stats.se});
    }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "mode,sigma,mean_delta_v,se\n" << std::setprecision(17);
  for (const auto& r : rows) out << to_string(r.mode) << ',' << r.sigma << ',' << r.mean_delta_v << ',' << r.se << '\n';
}

}  // namespace ors::analysis
