#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/gcrl/gaussian_policy.hpp"
#include "ors/gcrl/tabular_gciql.hpp"
#include "ors/nn/adam.hpp"
#include "ors/nn/mlp.hpp"
#include "ors/nn/target_copy.hpp"

namespace ors::gcrl {

/// V(s, g), double Q(s, a, g) with Polyak targets.
struct ExpectileCritic {
  nn::Mlp v;
  nn::Mlp q1, q2;
  nn::TargetCopy q1_target, q2_target;
  nn::AdamState v_adam, q1_adam, q2_adam;
  double kappa = 0.6;
  double gamma = 0.99;
  int state_dim = 0;
  int action_dim = 0;

  ExpectileCritic() = default;
  ExpectileCritic(int state_dim, int action_dim, const GciqlConfig& config, Rng& rng);

  Eigen::VectorXd value(const Eigen::MatrixXd& s, const Eigen::MatrixXd& g) const;
  Eigen::VectorXd q(const nn::Mlp& net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                    const Eigen::MatrixXd& g) const;
  /// min(Qbar1, Qbar2): the target the value function regresses toward.
  Eigen::VectorXd target_q_min(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) const;
};

/// Transitions with goals, rewards and continuation masks already attached.
struct GciqlBatch {
  Eigen::MatrixXd s, a, s_next, g;
  Eigen::VectorXd reward;
  Eigen::VectorXd mask;  ///< 0 where the goal is already reached
  Eigen::MatrixXd actor_g;  ///< goals for the actor loss (may differ from the critic's)
};

/// One update of V (expectile toward the min target Q), both Qs (TD with the
/// supplied rewards) and the actor (DDPG + BC with Q divided by the batch
/// mean |Q|), then Polyak on the Q targets. Throws NumericError naming the
/// first batch element with a non-finite loss term.
GciqlLosses gciql_step(ExpectileCritic& critic, GaussianPolicy& policy, const GciqlBatch& batch,
                       const GciqlConfig& config);

Eigen::MatrixXd critic_inputs(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g);

}  // namespace ors::gcrl
