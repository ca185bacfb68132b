#include "ors/gcrl/q_iteration.hpp"

#include <string>

#include "ors/common/error.hpp"

namespace ors::gcrl {

std::vector<int> argmax_set(const Eigen::RowVectorXd& row, double tolerance) {
  const double best = row.maxCoeff();
  std::vector<int> out;
  for (Eigen::Index a = 0; a < row.size(); ++a)
    if (row(a) >= best - tolerance) out.push_back(static_cast<int>(a));
  return out;
}

QIterationResult tabular_q_iteration(const envs::DeterministicMdp& mdp, const Eigen::VectorXd& reward, double gamma,
                                     const QIterationOptions& options) {
  if (reward.size() != mdp.num_pairs()) throw ShapeError("reward vector must have |S||A| entries");
  if (!reward.allFinite()) throw NumericError("reward table has non-finite entries");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  const int n = mdp.num_states();
  const int na = mdp.num_actions();

  QIterationResult out;
  out.q = Eigen::MatrixXd::Zero(n, na);
  out.v = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd next(n, na);
  for (out.iterations = 1;; ++out.iterations) {
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < na; ++a) next(s, a) = reward(s * na + a) + gamma * out.v(mdp.successor(s, a));
    out.residual = (next - out.q).cwiseAbs().maxCoeff();
    out.q.swap(next);
    out.v = out.q.rowwise().maxCoeff();
    if (out.residual < options.tol) break;
    if (out.iterations >= options.max_iterations)
      throw ConvergenceError("Q iteration stopped after " + std::to_string(out.iterations) +
                                 " sweeps with residual " + std::to_string(out.residual),
                             out.residual);
  }
  for (int s = 0; s < n; ++s) {
    out.argmax_sets.push_back(argmax_set(out.q.row(s), options.tie_tolerance));
    Eigen::Index best = 0;
    out.q.row(s).maxCoeff(&best);
    out.greedy.push_back(static_cast<int>(best));
  }
  return out;
}

QIterationResult tabular_q_iteration(const envs::DeterministicMdp& mdp, const exact::RewardTable& reward, int goal,
                                     double gamma, const QIterationOptions& options) {
  return tabular_q_iteration(mdp, Eigen::VectorXd(reward.r.col(reward.column_of(goal))), gamma, options);
}

}  // namespace ors::gcrl
