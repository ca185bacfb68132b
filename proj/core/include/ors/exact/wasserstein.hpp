#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/envs/mdp.hpp"
#include "ors/exact/occupancy.hpp"

namespace ors::exact {

/// M[(s, a), g] = W2^2(delta_g, d(. | s, a)) = sum_{s+} d(s+ | s, a) Phi(s+, g),
/// for the goals listed in `goals` (one column each).
struct WassersteinTable {
  Eigen::MatrixXd pair;   ///< |S||A| x |goals|
  Eigen::MatrixXd state;  ///< |S| x |goals|, E_{a ~ pi}[M(s, a, g)]
  std::vector<int> goals;
  int num_actions = 0;
  double recursion_residual = 0.0;  ///< sup-norm residual of the one-step recursion

  int column_of(int goal) const;
  double at(int s, int a, int goal) const { return pair(static_cast<Eigen::Index>(s) * num_actions + a, column_of(goal)); }
  double at_state(int s, int goal) const { return state(s, column_of(goal)); }
};

/// Phi(s+, g) for every state, as a column.
Eigen::VectorXd potential_column(const envs::DeterministicMdp& mdp, int goal);

/// Direct expectation sum D Phi. Validates the recursion
/// M(s, a, g) = (1 - gamma) Phi(f(s, a), g) + gamma E_{a'} M(f(s, a), a', g)
/// and throws NumericError if its residual exceeds 1e-9 relative to max Phi.
WassersteinTable wasserstein_to_goal(const OccupancyTable& occ, const envs::DeterministicMdp& mdp, int goal);
WassersteinTable wasserstein_to_goals(const OccupancyTable& occ, const envs::DeterministicMdp& mdp,
                                      const std::vector<int>& goals);
/// Every state as a goal.
WassersteinTable wasserstein_all_goals(const OccupancyTable& occ, const envs::DeterministicMdp& mdp);

/// Second route that never forms D: solves the M recursion for one goal
/// directly as an |S| linear system. Returns the |S||A| column.
Eigen::VectorXd wasserstein_recursion(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy,
                                      double gamma, int goal);

/// Residual of the one-step recursion for a candidate M column.
double wasserstein_recursion_residual(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy,
                                      double gamma, int goal, const Eigen::VectorXd& m_pair);

/// r^W = -M / scale, laid out like WassersteinTable::pair.
struct RewardTable {
  Eigen::MatrixXd r;
  std::vector<int> goals;
  int num_actions = 0;
  double scale = 1.0;

  int column_of(int goal) const;
  double at(int s, int a, int goal) const { return r(static_cast<Eigen::Index>(s) * num_actions + a, column_of(goal)); }
};

RewardTable shaped_reward_exact(const WassersteinTable& m, double scale);

/// Reward table in which every goal column is -1[s != g] (s the current state).
RewardTable sparse_reward_table(const envs::DeterministicMdp& mdp, const std::vector<int>& goals);

}  // namespace ors::exact
