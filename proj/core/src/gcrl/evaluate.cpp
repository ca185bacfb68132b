#include "ors/gcrl/evaluate.hpp"

#include <stdexcept>

#include "ors/common/parallel.hpp"

namespace ors::gcrl {

namespace {

struct Episode {
  bool success = false;
  double ret = 0.0;
};

EvalResult aggregate(const std::vector<Episode>& eps, std::size_t goals, int episodes) {
  EvalResult out;
  out.per_goal.assign(goals, 0.0);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    out.success_rate += eps[i].success;
    out.mean_return += eps[i].ret;
    out.per_goal[i / static_cast<std::size_t>(episodes)] += eps[i].success;
  }
  for (auto& p : out.per_goal) p /= episodes;
  out.success_rate /= static_cast<double>(eps.size());
  out.mean_return /= static_cast<double>(eps.size());
  return out;
}

}  // namespace

EvalResult evaluate_policy(const envs::DeterministicMdp& mdp, const DiscretePolicy& policy,
                           const std::vector<int>& goals, int episodes, int horizon, const Rng& rng) {
  if (goals.empty()) throw std::invalid_argument("evaluation needs at least one goal");
  if (episodes < 1 || horizon < 0) throw std::invalid_argument("episodes must be positive and horizon non-negative");
  if (mdp.num_states() < 2) throw std::invalid_argument("evaluation needs a start state different from the goal");
  std::vector<Episode> eps(goals.size() * static_cast<std::size_t>(episodes));
  parallel_for(eps.size(), [&](std::size_t k) {
    Rng local = rng.split(static_cast<std::uint64_t>(k));
    const int g = goals[k / static_cast<std::size_t>(episodes)];
    int s = local.uniform_int(mdp.num_states() - 1);
    if (s >= g) ++s;
    Episode e;
    for (int t = 0; t < horizon && s != g; ++t) {
      s = mdp.successor(s, policy(s, g));
      e.ret -= 1.0;
    }
    e.success = s == g;
    eps[k] = e;
  });
  return aggregate(eps, goals.size(), episodes);
}

EvalResult evaluate_policy(const envs::PointMaze2d& env, const ContinuousPolicy& policy,
                           const std::vector<Eigen::Vector2d>& goals, int episodes, int horizon, const Rng& rng) {
  if (goals.empty()) throw std::invalid_argument("evaluation needs at least one goal");
  if (episodes < 1 || horizon < 0) throw std::invalid_argument("episodes must be positive and horizon non-negative");
  std::vector<Episode> eps(goals.size() * static_cast<std::size_t>(episodes));
  parallel_for(eps.size(), [&](std::size_t k) {
    Rng local = rng.split(static_cast<std::uint64_t>(k));
    const Eigen::Vector2d g = goals[k / static_cast<std::size_t>(episodes)];
    Eigen::Vector2d s = env.sample_state(local);
    while (env.reached(s, g)) s = env.sample_state(local);
    Episode e;
    for (int t = 0; t < horizon && !env.reached(s, g); ++t) {
      s = env.step(s, policy(s, g), local);
      e.ret -= 1.0;
    }
    e.success = env.reached(s, g);
    eps[k] = e;
  });
  return aggregate(eps, goals.size(), episodes);
}

}  // namespace ors::gcrl
