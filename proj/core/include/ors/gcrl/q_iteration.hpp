#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/envs/mdp.hpp"
#include "ors/exact/wasserstein.hpp"

namespace ors::gcrl {

struct QIterationResult {
  Eigen::MatrixXd q;  ///< |S| x |A|
  Eigen::VectorXd v;  ///< max_a Q
  std::vector<int> greedy;                   ///< argmax, lowest action id on ties
  std::vector<std::vector<int>> argmax_sets; ///< all actions within tie_tolerance of the max
  double residual = 0.0;
  int iterations = 0;
};

struct QIterationOptions {
  double tol = 1e-10;
  int max_iterations = 1000000;
  double tie_tolerance = 1e-9;
};

/// Value iteration Q(s, a) = r(s, a) + gamma max_a' Q(f(s, a), a'), stopped
/// once the sup-norm change is below tol. `reward` has one entry per (s, a)
/// in row-major order. Throws ConvergenceError on hitting the cap.
QIterationResult tabular_q_iteration(const envs::DeterministicMdp& mdp, const Eigen::VectorXd& reward, double gamma,
                                     const QIterationOptions& options = {});
QIterationResult tabular_q_iteration(const envs::DeterministicMdp& mdp, const exact::RewardTable& reward, int goal,
                                     double gamma, const QIterationOptions& options = {});

/// Argmax set of one row, within `tolerance` of the row maximum.
std::vector<int> argmax_set(const Eigen::RowVectorXd& row, double tolerance);

}  // namespace ors::gcrl
