#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/flow/velocity_field.hpp"
#include "ors/gcrl/goal_sampler.hpp"
#include "ors/nn/adam.hpp"
#include "ors/nn/mlp.hpp"

namespace ors::reward {

/// Scalar network on [s; a; g]. It regresses the unscaled value -MSE;
/// `scale` is applied when the reward is read out.
struct RewardNet {
  nn::Mlp net;
  nn::AdamState adam;
  int state_dim = 0;
  int action_dim = 0;
  double scale = 1.0;

  RewardNet() = default;
  RewardNet(int state_dim, int action_dim, const std::vector<int>& hidden, bool layer_norm, Rng& rng,
            double lr = 3e-4, double scale = 1.0);

  /// Unscaled outputs, one per column of (s, a, g).
  Eigen::VectorXd raw(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) const;
  double raw(const Eigen::VectorXd& s, const Eigen::VectorXd& a, const Eigen::VectorXd& g) const;
};

Eigen::MatrixXd reward_inputs(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g);

struct RewardTrainConfig {
  std::vector<int> hidden{64, 64};
  bool layer_norm = true;
  int steps = 2000;
  int batch_size = 64;
  int mc_draws = 32;
  double lr = 3e-4;
  double scale = 1.0;
  gcrl::GoalSampler sampler{0.2, 0.5, 0.3, true, 0.99};
};

/// Goals of a batch materialised as state columns.
Eigen::MatrixXd goal_states(const envs::EmbeddedDataset& data, const std::vector<gcrl::GoalRef>& goals);

/// Adam regression of the net onto -estimate_w2 with targets recomputed every
/// step from fresh noise. Deterministic per seed.
RewardNet train_reward(const flow::VelocityFieldNet& occupancy, const envs::EmbeddedDataset& data,
                       const RewardTrainConfig& config, const Rng& rng, std::vector<double>* losses = nullptr);

}  // namespace ors::reward
