#include "ors/exact/occupancy.hpp"

#include <Eigen/LU>

#include "ors/common/error.hpp"

namespace ors::exact {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
}

// Rows of P * X, where P is the one-hot successor matrix: row (s, a) = X.row(f(s, a)).
Eigen::MatrixXd gather_successor_rows(const envs::DeterministicMdp& mdp, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(mdp.num_pairs(), x.cols());
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < mdp.num_actions(); ++a) out.row(s * mdp.num_actions() + a) = x.row(mdp.successor(s, a));
  return out;
}

// Rows of Pi * Y with Y indexed by (s, a).
Eigen::MatrixXd policy_average(const envs::DeterministicMdp& mdp, const envs::PolicyTable& pi,
                               const Eigen::MatrixXd& y) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mdp.num_states(), y.cols());
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < mdp.num_actions(); ++a)
      if (pi(s, a) != 0.0) out.row(s) += pi(s, a) * y.row(s * mdp.num_actions() + a);
  return out;
}

}  // namespace

Eigen::MatrixXd OccupancyTable::state_average() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.cols(), d.cols());
  for (int s = 0; s < num_states(); ++s)
    for (int a = 0; a < num_actions; ++a) out.row(s) += policy(s, a) * d.row(row_of(s, a));
  return out;
}

Eigen::MatrixXd state_transition(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(mdp.num_states(), mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < mdp.num_actions(); ++a) t(s, mdp.successor(s, a)) += policy(s, a);
  return t;
}

OccupancyTable solve_occupancy(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy, double gamma,
                               SolveMethod method) {
  check_gamma(gamma);
  envs::validate_policy(mdp, policy);
  const int n = mdp.num_states();
  if (method == SolveMethod::automatic)
    method = n <= kDirectSolveMaxStates ? SolveMethod::direct : SolveMethod::iterative;

  OccupancyTable occ;
  occ.gamma = gamma;
  occ.policy = policy;
  occ.num_actions = mdp.num_actions();

  if (method == SolveMethod::direct) {
    const Eigen::MatrixXd t = state_transition(mdp, policy);
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - gamma * t;
    const Eigen::MatrixXd x = lhs.partialPivLu().solve((1.0 - gamma) * t);
    Eigen::MatrixXd inner = gamma * x;
    inner.diagonal().array() += 1.0 - gamma;
    occ.d = gather_successor_rows(mdp, inner);
  } else {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);  // X = Pi d
    Eigen::MatrixXd inner;
    for (int iter = 0;; ++iter) {
      inner = gamma * x;
      inner.diagonal().array() += 1.0 - gamma;
      Eigen::MatrixXd next = policy_average(mdp, policy, gather_successor_rows(mdp, inner));
      const double change = (next - x).cwiseAbs().maxCoeff();
      x.swap(next);
      if (change < 1e-12) break;
      if (iter > 1000000) throw ConvergenceError("occupancy iteration did not converge", change);
    }
    inner = gamma * x;
    inner.diagonal().array() += 1.0 - gamma;
    occ.d = gather_successor_rows(mdp, inner);
  }
  return occ;
}

double bellman_residual(const envs::DeterministicMdp& mdp, const OccupancyTable& occ) {
  const int n = mdp.num_states();
  if (occ.d.rows() != mdp.num_pairs() || occ.d.cols() != n) throw ShapeError("occupancy table does not fit the MDP");
  Eigen::MatrixXd inner = occ.gamma * policy_average(mdp, occ.policy, occ.d);
  inner.diagonal().array() += 1.0 - occ.gamma;
  return (occ.d - gather_successor_rows(mdp, inner)).cwiseAbs().maxCoeff();
}

}  // namespace ors::exact
