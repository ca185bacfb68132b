#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/envs/mdp.hpp"
#include "ors/envs/point_maze.hpp"

namespace ors::gcrl {

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;         ///< undiscounted sum of -1 per step spent away from the goal
  std::vector<double> per_goal;     ///< success rate per goal, in input order
};

using DiscretePolicy = std::function<int(int s, int g)>;
using ContinuousPolicy = std::function<Eigen::VectorXd(const Eigen::VectorXd& s, const Eigen::VectorXd& g)>;

/// Episodes start at states drawn uniformly among those different from the
/// goal; success means the goal state is reached within `horizon` steps.
/// Episode k of goal i uses rng.split(i * episodes + k).
EvalResult evaluate_policy(const envs::DeterministicMdp& mdp, const DiscretePolicy& policy,
                           const std::vector<int>& goals, int episodes, int horizon, const Rng& rng);

/// Continuous version; success means coming within the goal radius.
EvalResult evaluate_policy(const envs::PointMaze2d& env, const ContinuousPolicy& policy,
                           const std::vector<Eigen::Vector2d>& goals, int episodes, int horizon, const Rng& rng);

}  // namespace ors::gcrl
