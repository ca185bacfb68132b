#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace ors::envs {

/// Row-stochastic behavioural policy table, one row per state, one column per action.
using PolicyTable = Eigen::MatrixXd;

/// Finite MDP with a total deterministic successor function f(s, a) and a
/// coordinate embedding per state (the space the squared-distance potential
/// lives in).
class DeterministicMdp {
 public:
  DeterministicMdp() = default;
  /// successors[s * num_actions + a] = f(s, a); coords is dim x num_states.
  DeterministicMdp(int num_states, int num_actions, std::vector<int> successors, Eigen::MatrixXd coords,
                   double gamma);

  int num_states() const noexcept { return num_states_; }
  int num_actions() const noexcept { return num_actions_; }
  int num_pairs() const noexcept { return num_states_ * num_actions_; }
  double gamma() const noexcept { return gamma_; }
  int embedding_dim() const noexcept { return static_cast<int>(coords_.rows()); }

  int successor(int s, int a) const { return successors_[static_cast<std::size_t>(s * num_actions_ + a)]; }
  const std::vector<int>& successors() const noexcept { return successors_; }
  Eigen::VectorXd embedding(int s) const { return coords_.col(s); }
  const Eigen::MatrixXd& coords() const noexcept { return coords_; }

  /// Squared Euclidean distance between the embeddings of s and g.
  double potential(int s, int g) const { return (coords_.col(s) - coords_.col(g)).squaredNorm(); }

  /// Copy in which every action at g leads back to g.
  DeterministicMdp with_absorbing_goal(int g) const;
  /// Same dynamics with another discount.
  DeterministicMdp with_gamma(double gamma) const;

  /// State whose embedding equals `x` exactly, or -1.
  int state_at(const Eigen::VectorXd& x) const;
  /// State whose embedding is closest to `x` in Euclidean distance.
  int nearest_state(const Eigen::VectorXd& x) const;

  void validate_state(int s) const;
  void validate_action(int a) const;

  std::string name;  ///< free-form label for reports

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<int> successors_;
  Eigen::MatrixXd coords_;
  double gamma_ = 0.99;
};

PolicyTable uniform_policy(const DeterministicMdp& mdp);
/// Throws std::invalid_argument unless the table is non-negative with rows summing to 1.
void validate_policy(const DeterministicMdp& mdp, const PolicyTable& policy);

}  // namespace ors::envs
