#include "ors/exact/wasserstein.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/LU>

#include "ors/common/error.hpp"

namespace ors::exact {

namespace {

int find_column(const std::vector<int>& goals, int goal) {
  auto it = std::find(goals.begin(), goals.end(), goal);
  if (it == goals.end()) throw std::out_of_range("goal " + std::to_string(goal) + " is not in the table");
  return static_cast<int>(it - goals.begin());
}

}  // namespace

int WassersteinTable::column_of(int goal) const { return find_column(goals, goal); }
int RewardTable::column_of(int goal) const { return find_column(goals, goal); }

Eigen::VectorXd potential_column(const envs::DeterministicMdp& mdp, int goal) {
  mdp.validate_state(goal);
  Eigen::VectorXd phi(mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s) phi(s) = mdp.potential(s, goal);
  return phi;
}

double wasserstein_recursion_residual(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy,
                                      double gamma, int goal, const Eigen::VectorXd& m_pair) {
  const int na = mdp.num_actions();
  Eigen::VectorXd m_state = Eigen::VectorXd::Zero(mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < na; ++a) m_state(s) += policy(s, a) * m_pair(s * na + a);
  double worst = 0.0;
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < na; ++a) {
      const int next = mdp.successor(s, a);
      const double rhs = (1.0 - gamma) * mdp.potential(next, goal) + gamma * m_state(next);
      worst = std::max(worst, std::abs(m_pair(s * na + a) - rhs));
    }
  return worst;
}

WassersteinTable wasserstein_to_goals(const OccupancyTable& occ, const envs::DeterministicMdp& mdp,
                                      const std::vector<int>& goals) {
  if (occ.d.rows() != mdp.num_pairs() || occ.d.cols() != mdp.num_states())
    throw ShapeError("occupancy table does not fit the MDP");
  Eigen::MatrixXd phi(mdp.num_states(), static_cast<Eigen::Index>(goals.size()));
  for (std::size_t j = 0; j < goals.size(); ++j) phi.col(static_cast<Eigen::Index>(j)) = potential_column(mdp, goals[j]);

  WassersteinTable m;
  m.goals = goals;
  m.num_actions = mdp.num_actions();
  m.pair = occ.d * phi;
  m.state = Eigen::MatrixXd::Zero(mdp.num_states(), phi.cols());
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < m.num_actions; ++a) m.state.row(s) += occ.policy(s, a) * m.pair.row(s * m.num_actions + a);

  double scale = 1.0;
  for (std::size_t j = 0; j < goals.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    scale = std::max(scale, phi.col(col).maxCoeff());
    m.recursion_residual = std::max(
        m.recursion_residual, wasserstein_recursion_residual(mdp, occ.policy, occ.gamma, goals[j], m.pair.col(col)));
  }
  if (m.recursion_residual > 1e-9 * scale)
    throw NumericError("Wasserstein recursion residual " + std::to_string(m.recursion_residual) + " too large");
  return m;
}

WassersteinTable wasserstein_to_goal(const OccupancyTable& occ, const envs::DeterministicMdp& mdp, int goal) {
  return wasserstein_to_goals(occ, mdp, {goal});
}

WassersteinTable wasserstein_all_goals(const OccupancyTable& occ, const envs::DeterministicMdp& mdp) {
  std::vector<int> goals(static_cast<std::size_t>(mdp.num_states()));
  for (int g = 0; g < mdp.num_states(); ++g) goals[static_cast<std::size_t>(g)] = g;
  return wasserstein_to_goals(occ, mdp, goals);
}

Eigen::VectorXd wasserstein_recursion(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy,
                                      double gamma, int goal) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  envs::validate_policy(mdp, policy);
  const int n = mdp.num_states();
  const int na = mdp.num_actions();
  const Eigen::VectorXd phi = potential_column(mdp, goal);
  // m = E_{a ~ pi} M(s, a, g) satisfies (I - gamma T) m = (1 - gamma) T phi.
  const Eigen::MatrixXd t = state_transition(mdp, policy);
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - gamma * t;
  const Eigen::VectorXd m_state = lhs.partialPivLu().solve((1.0 - gamma) * (t * phi));
  Eigen::VectorXd out(mdp.num_pairs());
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < na; ++a) {
      const int next = mdp.successor(s, a);
      out(s * na + a) = (1.0 - gamma) * phi(next) + gamma * m_state(next);
    }
  return out;
}

RewardTable shaped_reward_exact(const WassersteinTable& m, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("reward scale must be positive");
  RewardTable r;
  r.r = -m.pair / scale;
  r.goals = m.goals;
  r.num_actions = m.num_actions;
  r.scale = scale;
  return r;
}

RewardTable sparse_reward_table(const envs::DeterministicMdp& mdp, const std::vector<int>& goals) {
  RewardTable r;
  r.goals = goals;
  r.num_actions = mdp.num_actions();
  r.r = Eigen::MatrixXd::Constant(mdp.num_pairs(), static_cast<Eigen::Index>(goals.size()), -1.0);
  for (std::size_t j = 0; j < goals.size(); ++j)
    for (int a = 0; a < mdp.num_actions(); ++a)
      r.r(static_cast<Eigen::Index>(goals[j]) * mdp.num_actions() + a, static_cast<Eigen::Index>(j)) = 0.0;
  return r;
}

}  // namespace ors::exact
