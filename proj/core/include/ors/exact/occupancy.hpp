#pragma once

#include <Eigen/Core>

#include "ors/envs/mdp.hpp"

namespace ors::exact {

/// Exact discounted future-state distribution. Row s * |A| + a of `d` holds
/// d(s+ | s, a); the first future state is f(s, a) (Delta t >= 1).
struct OccupancyTable {
  Eigen::MatrixXd d;
  double gamma = 0.0;
  envs::PolicyTable policy;
  int num_actions = 0;

  int num_states() const noexcept { return static_cast<int>(d.cols()); }
  Eigen::Index row_of(int s, int a) const { return static_cast<Eigen::Index>(s) * num_actions + a; }
  auto row(int s, int a) const { return d.row(row_of(s, a)); }
  /// E_{a ~ pi}[d(. | s, a)], one row per state.
  Eigen::MatrixXd state_average() const;
};

enum class SolveMethod { automatic, direct, iterative };

/// Largest |S| handled by the dense solve under SolveMethod::automatic.
inline constexpr int kDirectSolveMaxStates = 3000;

/// Solves d = (1 - gamma) P + gamma P Pi d. The direct route reduces it to the
/// |S| x |S| system (I - gamma T) X = (1 - gamma) T with T = Pi P, X = Pi d,
/// then d = P ((1 - gamma) I + gamma X). The iterative route applies the
/// recursion until the sup-norm change drops below 1e-12.
OccupancyTable solve_occupancy(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy, double gamma,
                               SolveMethod method = SolveMethod::automatic);

/// || d - ((1 - gamma) P + gamma P Pi d) ||_inf.
double bellman_residual(const envs::DeterministicMdp& mdp, const OccupancyTable& occ);

/// T = Pi P: T(s, s') = sum_a pi(a|s) 1[f(s, a) = s'].
Eigen::MatrixXd state_transition(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy);

}  // namespace ors::exact
