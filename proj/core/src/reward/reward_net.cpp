#include "ors/reward/reward_net.hpp"

#include <stdexcept>

#include "ors/common/error.hpp"
#include "ors/flow/training.hpp"
#include "ors/reward/w2_estimate.hpp"

namespace ors::reward {

RewardNet::RewardNet(int state_dim_, int action_dim_, const std::vector<int>& hidden, bool layer_norm, Rng& rng,
                     double lr, double scale_)
    : state_dim(state_dim_), action_dim(action_dim_), scale(scale_) {
  if (!(scale > 0.0)) throw std::invalid_argument("reward scale must be positive");
  std::vector<int> widths{2 * state_dim + action_dim};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(1);
  net = nn::Mlp::build(widths, layer_norm, rng);
  adam = nn::AdamState::zeros(static_cast<Eigen::Index>(net.num_params()), lr);
}

Eigen::MatrixXd reward_inputs(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) {
  if (a.cols() != s.cols() || g.cols() != s.cols()) throw ShapeError("reward inputs: batch sizes differ");
  Eigen::MatrixXd in(s.rows() + a.rows() + g.rows(), s.cols());
  in << s, a, g;
  return in;
}

Eigen::VectorXd RewardNet::raw(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) const {
  return net.forward_batch(reward_inputs(s, a, g)).row(0).transpose();
}

double RewardNet::raw(const Eigen::VectorXd& s, const Eigen::VectorXd& a, const Eigen::VectorXd& g) const {
  return net.forward(reward_inputs(s, a, g).col(0))(0);
}

Eigen::MatrixXd goal_states(const envs::EmbeddedDataset& data, const std::vector<gcrl::GoalRef>& goals) {
  Eigen::MatrixXd out(data.state_dim(), static_cast<Eigen::Index>(goals.size()));
  for (std::size_t j = 0; j < goals.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(goals[j].tuple);
    out.col(static_cast<Eigen::Index>(j)) = goals[j].next ? data.s_next.col(i) : data.s.col(i);
  }
  return out;
}

RewardNet train_reward(const flow::VelocityFieldNet& occupancy, const envs::EmbeddedDataset& data,
                       const RewardTrainConfig& config, const Rng& rng, std::vector<double>* losses) {
  if (data.empty()) throw std::invalid_argument("cannot train the reward on an empty dataset");
  if (data.state_dim() != occupancy.state_dim || data.action_dim() != occupancy.action_dim)
    throw ShapeError("dataset does not match the occupancy model");
  config.sampler.validate();
  Rng init = rng.split("init");
  RewardNet out(data.state_dim(), data.action_dim(), config.hidden, config.layer_norm, init, config.lr, config.scale);
  Rng stream = rng.split("train");
  for (int step = 0; step < config.steps; ++step) {
    const auto idx = flow::draw_indices(data.size(), config.batch_size, stream);
    const auto goals = gcrl::sample_goals(data.offsets, idx, config.sampler, stream);
    const flow::FlowBatch batch = flow::make_batch(data, idx);
    const Eigen::MatrixXd g = goal_states(data, goals);
    const Eigen::VectorXd target = -estimate_w2_batch(occupancy.online, batch.s, batch.a, g, config.mc_draws, stream);

    nn::ForwardCache cache;
    const Eigen::MatrixXd pred = out.net.forward_batch(reward_inputs(batch.s, batch.a, g), &cache);
    const Eigen::RowVectorXd residual = pred.row(0) - target.transpose();
    const double n = static_cast<double>(residual.size());
    const Eigen::VectorXd grad = out.net.backward(cache, (2.0 / n) * residual).params;
    nn::adam_step(out.net.params(), grad, out.adam);
    if (losses) losses->push_back(residual.squaredNorm() / n);
  }
  return out;
}

}  // namespace ors::reward
