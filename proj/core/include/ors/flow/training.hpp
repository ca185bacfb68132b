#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/flow/velocity_field.hpp"

namespace ors::flow {

/// How the bootstrapped branch builds its regression point x_t.
///  sampled_x1:  x_1 from the target-net Euler sampler at (s', a'), then
///               x_t = (1 - t) x_0 + t x_1 with a fresh x_0 and t.
///  target_path: x_t is the target net's own Euler trajectory from a fresh
///               x_0 stopped at time t.
enum class FutureTargetMode { sampled_x1, target_path };

std::string to_string(FutureTargetMode mode);
FutureTargetMode parse_future_target_mode(const std::string& name);

/// Columns of (s, a, s', a') plus, for the warm start, the chosen future state.
struct FlowBatch {
  Eigen::MatrixXd s, a, s_next, a_next;
  Eigen::MatrixXd x1;  ///< warm-start target (geometric-horizon future); unused by the TD loss

  Eigen::Index size() const noexcept { return s.cols(); }
};

/// x_0 ~ N(0, I) and t ~ U(0, 1) for one regression branch.
struct FlowNoise {
  Eigen::MatrixXd x0;
  Eigen::RowVectorXd t;
};

/// Draws x_0 first, then t. Both the warm-start and TD losses take their
/// first branch's noise from this, so at gamma = 0 the two consume the
/// stream identically.
FlowNoise draw_flow_noise(int dim, Eigen::Index batch, Rng& rng);

/// x_t = (1 - t) x_0 + t x_1, column-wise.
Eigen::MatrixXd interpolate(const FlowNoise& noise, const Eigen::MatrixXd& x1);

/// Batch of uniformly drawn tuple indices (with replacement).
FlowBatch make_batch(const envs::EmbeddedDataset& data, const std::vector<std::size_t>& indices);
std::vector<std::size_t> draw_indices(std::size_t dataset_size, int batch_size, Rng& rng);
/// Fills batch.x1 with the state t_tau ~ Geom(1 - gamma) steps after s
/// (t_tau = 1 is s'), clamped to the trajectory's last state.
void attach_geometric_futures(FlowBatch& batch, const envs::EmbeddedDataset& data,
                              const std::vector<std::size_t>& indices, double gamma, Rng& rng);

/// mean_i |v(t_i, s_i, a_i, x_t) - target_i|^2; adds its gradient into grad when non-null.
double regression_loss(const nn::Mlp& net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                       const FlowNoise& noise, const Eigen::MatrixXd& xt, const Eigen::MatrixXd& target,
                       double weight, Eigen::VectorXd* grad);

/// Plain flow matching toward x_1 = batch.x1.
double warm_start_loss(const nn::Mlp& net, const FlowBatch& batch, const FlowNoise& noise, Eigen::VectorXd* grad);

/// Next-state branch: x_1 = s'.
double next_state_loss(const nn::Mlp& net, const FlowBatch& batch, const FlowNoise& noise, Eigen::VectorXd* grad);

/// Bootstrapped branch. `boot` seeds the target-net sampler, `reg` the
/// regression point. The target's velocity enters only as a constant.
double future_loss(const nn::Mlp& online, const nn::Mlp& target, const FlowBatch& batch, const FlowNoise& boot,
                   const FlowNoise& reg, int flow_steps, FutureTargetMode mode, Eigen::VectorXd* grad);

struct FlowLossTerms {
  double total = 0.0;
  double next = 0.0;
  double future = 0.0;
};

/// (1 - gamma) L_next + gamma L_future and its gradient, noise drawn from rng.
/// The future branch is skipped entirely when gamma == 0.
FlowLossTerms flow_loss_gradient(const VelocityFieldNet& net, const FlowBatch& batch, double gamma, int flow_steps,
                                 FutureTargetMode mode, Rng& rng, Eigen::VectorXd& grad);
/// Warm-start loss and gradient; batch.x1 must already hold the futures.
double pretrain_gradient(const VelocityFieldNet& net, const FlowBatch& batch, Rng& rng, Eigen::VectorXd& grad);

/// One Adam step on the warm-start loss; returns the pre-step loss.
double pretrain_step(VelocityFieldNet& net, const FlowBatch& batch, Rng& rng);
/// One Adam step on the TD flow loss followed by a Polyak update of the target.
FlowLossTerms flow_loss_step(VelocityFieldNet& net, const FlowBatch& batch, double gamma, int flow_steps,
                             FutureTargetMode mode, Rng& rng);

struct OccupancyTrainConfig {
  std::vector<int> hidden{64, 64, 64};
  bool layer_norm = true;
  double gamma = 0.99;
  int pretrain_steps = 2000;
  int flow_loss_steps = 2000;
  int flow_steps_train = 16;
  int flow_steps_sample = 16;
  int batch_size = 64;
  double lr = 3e-4;
  double target_rate = 0.005;
  double final_lr_ratio = 1.0;  ///< < 1 enables a cosine decay of the Adam rate to lr * final_lr_ratio
  FutureTargetMode future_target_mode = FutureTargetMode::sampled_x1;
};

struct OccupancyTrainResult {
  VelocityFieldNet net;
  std::vector<double> pretrain_losses;
  std::vector<FlowLossTerms> flow_losses;
};

/// Warm start for pretrain_steps, then TD flow matching for flow_loss_steps.
/// The network is initialised from rng.split("init"), batches from the rest.
OccupancyTrainResult train_occupancy(const envs::EmbeddedDataset& data, const OccupancyTrainConfig& config,
                                     const Rng& rng);
/// Continues training an existing network.
void continue_training(VelocityFieldNet& net, const envs::EmbeddedDataset& data, const OccupancyTrainConfig& config,
                       Rng& rng, OccupancyTrainResult* log = nullptr);

}  // namespace ors::flow
