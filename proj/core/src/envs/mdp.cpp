#include "ors/envs/mdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ors/common/error.hpp"

namespace ors::envs {

DeterministicMdp::DeterministicMdp(int num_states, int num_actions, std::vector<int> successors,
                                   Eigen::MatrixXd coords, double gamma)
    : num_states_(num_states),
      num_actions_(num_actions),
      successors_(std::move(successors)),
      coords_(std::move(coords)),
      gamma_(gamma) {
  if (num_states_ <= 0 || num_actions_ <= 0) throw std::invalid_argument("mdp: need at least one state and action");
  if (successors_.size() != static_cast<std::size_t>(num_states_ * num_actions_))
    throw ShapeError("mdp: successor table must have num_states * num_actions entries");
  for (int next : successors_)
    if (next < 0 || next >= num_states_) throw std::invalid_argument("mdp: successor out of range");
  if (coords_.cols() != num_states_) throw ShapeError("mdp: one embedding column per state required");
  if (!(gamma_ > 0.0 && gamma_ < 1.0)) throw std::invalid_argument("mdp: gamma must lie in (0, 1)");
}

DeterministicMdp DeterministicMdp::with_absorbing_goal(int g) const {
  validate_state(g);
  DeterministicMdp out = *this;
  for (int a = 0; a < num_actions_; ++a) out.successors_[static_cast<std::size_t>(g * num_actions_ + a)] = g;
  return out;
}

DeterministicMdp DeterministicMdp::with_gamma(double gamma) const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("mdp: gamma must lie in (0, 1)");
  DeterministicMdp out = *this;
  out.gamma_ = gamma;
  return out;
}

int DeterministicMdp::state_at(const Eigen::VectorXd& x) const {
  if (x.size() != coords_.rows()) return -1;
  for (int s = 0; s < num_states_; ++s)
    if (coords_.col(s) == x) return s;
  return -1;
}

int DeterministicMdp::nearest_state(const Eigen::VectorXd& x) const {
  if (x.size() != coords_.rows()) throw ShapeError("nearest_state: embedding dimension mismatch");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int s = 0; s < num_states_; ++s) {
    const double d = (coords_.col(s) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

void DeterministicMdp::validate_state(int s) const {
  if (s < 0 || s >= num_states_) throw std::out_of_range("state " + std::to_string(s) + " outside the MDP");
}

void DeterministicMdp::validate_action(int a) const {
  if (a < 0 || a >= num_actions_) throw std::out_of_range("action " + std::to_string(a) + " outside the MDP");
}

PolicyTable uniform_policy(const DeterministicMdp& mdp) {
  return PolicyTable::Constant(mdp.num_states(), mdp.num_actions(), 1.0 / mdp.num_actions());
}

void validate_policy(const DeterministicMdp& mdp, const PolicyTable& policy) {
  if (policy.rows() != mdp.num_states() || policy.cols() != mdp.num_actions())
    throw ShapeError("policy table must be num_states x num_actions");
  for (Eigen::Index s = 0; s < policy.rows(); ++s) {
    if ((policy.row(s).array() < 0.0).any() || !policy.row(s).allFinite())
      throw std::invalid_argument("policy row " + std::to_string(s) + " has negative or non-finite entries");
    if (std::abs(policy.row(s).sum() - 1.0) > 1e-9)
      throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
  }
}

}  // namespace ors::envs
