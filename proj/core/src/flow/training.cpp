#include "ors/flow/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ors/common/error.hpp"

namespace ors::flow {

std::string to_string(FutureTargetMode mode) {
  return mode == FutureTargetMode::sampled_x1 ? "sampled_x1" : "target_path";
}

FutureTargetMode parse_future_target_mode(const std::string& name) {
  if (name == "sampled_x1") return FutureTargetMode::sampled_x1;
  if (name == "target_path") return FutureTargetMode::target_path;
  throw std::invalid_argument("unknown future_target_mode '" + name + "' (expected sampled_x1 or target_path)");
}

FlowNoise draw_flow_noise(int dim, Eigen::Index batch, Rng& rng) {
  FlowNoise noise;
  noise.x0 = rng.normal_matrix(dim, batch);
  noise.t.resize(batch);
  for (Eigen::Index i = 0; i < batch; ++i) noise.t(i) = rng.uniform();
  return noise;
}

Eigen::MatrixXd interpolate(const FlowNoise& noise, const Eigen::MatrixXd& x1) {
  if (x1.rows() != noise.x0.rows() || x1.cols() != noise.x0.cols()) throw ShapeError("interpolate: shape mismatch");
  const Eigen::RowVectorXd one_minus = (1.0 - noise.t.array()).matrix();
  return noise.x0 * one_minus.asDiagonal() + x1 * noise.t.asDiagonal();
}

std::vector<std::size_t> draw_indices(std::size_t dataset_size, int batch_size, Rng& rng) {
  if (dataset_size == 0) throw std::invalid_argument("cannot draw a batch from an empty dataset");
  if (batch_size < 1) throw std::invalid_argument("batch size must be positive");
  std::vector<std::size_t> out(static_cast<std::size_t>(batch_size));
  for (auto& i : out) i = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(dataset_size)));
  return out;
}

FlowBatch make_batch(const envs::EmbeddedDataset& data, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw std::invalid_argument("empty batch");
  const auto n = static_cast<Eigen::Index>(indices.size());
  FlowBatch b;
  b.s.resize(data.state_dim(), n);
  b.s_next.resize(data.state_dim(), n);
  b.a.resize(data.action_dim(), n);
  b.a_next.resize(data.action_dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto i = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(j)]);
    b.s.col(j) = data.s.col(i);
    b.a.col(j) = data.a.col(i);
    b.s_next.col(j) = data.s_next.col(i);
    b.a_next.col(j) = data.a_next.col(i);
  }
  b.x1 = b.s_next;
  return b;
}

void attach_geometric_futures(FlowBatch& batch, const envs::EmbeddedDataset& data,
                              const std::vector<std::size_t>& indices, double gamma, Rng& rng) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  batch.x1.resize(data.state_dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j)
    batch.x1.col(static_cast<Eigen::Index>(j)) = data.future_state(indices[j], rng.geometric(1.0 - gamma));
}

double regression_loss(const nn::Mlp& net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                       const FlowNoise& noise, const Eigen::MatrixXd& xt, const Eigen::MatrixXd& target,
                       double weight, Eigen::VectorXd* grad) {
  const auto n = static_cast<double>(s.cols());
  nn::ForwardCache cache;
  const Eigen::MatrixXd v = net.forward_batch(flow_inputs(noise.t, s, a, xt), grad ? &cache : nullptr);
  const Eigen::MatrixXd residual = v - target;
  if (grad) *grad += net.backward(cache, (2.0 * weight / n) * residual).params;
  return residual.squaredNorm() / n;
}

double warm_start_loss(const nn::Mlp& net, const FlowBatch& batch, const FlowNoise& noise, Eigen::VectorXd* grad) {
  return regression_loss(net, batch.s, batch.a, noise, interpolate(noise, batch.x1), batch.x1 - noise.x0, 1.0, grad);
}

double next_state_loss(const nn::Mlp& net, const FlowBatch& batch, const FlowNoise& noise, Eigen::VectorXd* grad) {
  return regression_loss(net, batch.s, batch.a, noise, interpolate(noise, batch.s_next), batch.s_next - noise.x0,
                         1.0, grad);
}

double future_loss(const nn::Mlp& online, const nn::Mlp& target, const FlowBatch& batch, const FlowNoise& boot,
                   const FlowNoise& reg, int flow_steps, FutureTargetMode mode, Eigen::VectorXd* grad) {
  Eigen::MatrixXd xt;
  if (mode == FutureTargetMode::sampled_x1) {
    const Eigen::MatrixXd x1 = euler_integrate(target, batch.s_next, batch.a_next, boot.x0, flow_steps);
    xt = interpolate(reg, x1);
  } else {
    xt = euler_integrate(target, batch.s_next, batch.a_next, reg.x0, flow_steps, &reg.t);
  }
  const Eigen::MatrixXd frozen = velocity(target, reg.t, batch.s_next, batch.a_next, xt);
  return regression_loss(online, batch.s, batch.a, reg, xt, frozen, 1.0, grad);
}

FlowLossTerms flow_loss_gradient(const VelocityFieldNet& net, const FlowBatch& batch, double gamma, int flow_steps,
                                 FutureTargetMode mode, Rng& rng, Eigen::VectorXd& grad) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  const Eigen::Index p = static_cast<Eigen::Index>(net.online.num_params());
  FlowLossTerms terms;
  const FlowNoise next_noise = draw_flow_noise(net.state_dim, batch.size(), rng);
  Eigen::VectorXd g_next = Eigen::VectorXd::Zero(p);
  terms.next = next_state_loss(net.online, batch, next_noise, &g_next);
  grad = (1.0 - gamma) * g_next;
  terms.total = (1.0 - gamma) * terms.next;
  if (gamma > 0.0) {
    const FlowNoise boot = draw_flow_noise(net.state_dim, batch.size(), rng);
    const FlowNoise reg = draw_flow_noise(net.state_dim, batch.size(), rng);
    Eigen::VectorXd g_future = Eigen::VectorXd::Zero(p);
    terms.future = future_loss(net.online, net.target.shadow, batch, boot, reg, flow_steps, mode, &g_future);
    grad += gamma * g_future;
    terms.total += gamma * terms.future;
  }
  return terms;
}

double pretrain_gradient(const VelocityFieldNet& net, const FlowBatch& batch, Rng& rng, Eigen::VectorXd& grad) {
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  const FlowNoise noise = draw_flow_noise(net.state_dim, batch.size(), rng);
  grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.online.num_params()));
  return warm_start_loss(net.online, batch, noise, &grad);
}

double pretrain_step(VelocityFieldNet& net, const FlowBatch& batch, Rng& rng) {
  Eigen::VectorXd grad;
  const double loss = pretrain_gradient(net, batch, rng, grad);
  nn::adam_step(net.online.params(), grad, net.adam);
  return loss;
}

FlowLossTerms flow_loss_step(VelocityFieldNet& net, const FlowBatch& batch, double gamma, int flow_steps,
                             FutureTargetMode mode, Rng& rng) {
  Eigen::VectorXd grad;
  const FlowLossTerms terms = flow_loss_gradient(net, batch, gamma, flow_steps, mode, rng, grad);
  nn::adam_step(net.online.params(), grad, net.adam);
  nn::polyak_update(net.target, net.online);
  return terms;
}

void continue_training(VelocityFieldNet& net, const envs::EmbeddedDataset& data, const OccupancyTrainConfig& config,
                       Rng& rng, OccupancyTrainResult* log) {
  if (config.pretrain_steps + config.flow_loss_steps > 0 && data.empty())
    throw std::invalid_argument("cannot train the occupancy model on an empty dataset");
  const int total = config.pretrain_steps + config.flow_loss_steps;
  auto anneal = [&](int k) {
    if (config.final_lr_ratio >= 1.0) return;
    const double c = 0.5 * (1.0 + std::cos(std::numbers::pi * k / std::max(1, total)));
    net.adam.lr = config.lr * (config.final_lr_ratio + (1.0 - config.final_lr_ratio) * c);
  };
  for (int step = 0; step < config.pretrain_steps; ++step) {
    anneal(step);
    const auto idx = draw_indices(data.size(), config.batch_size, rng);
    FlowBatch batch = make_batch(data, idx);
    attach_geometric_futures(batch, data, idx, config.gamma, rng);
    const double loss = pretrain_step(net, batch, rng);
    if (log) log->pretrain_losses.push_back(loss);
  }
  if (config.pretrain_steps > 0) nn::polyak_update(net.target, net.online, 1.0);
  for (int step = 0; step < config.flow_loss_steps; ++step) {
    anneal(config.pretrain_steps + step);
    const auto idx = draw_indices(data.size(), config.batch_size, rng);
    const FlowBatch batch = make_batch(data, idx);
    const auto terms = flow_loss_step(net, batch, config.gamma, config.flow_steps_train, config.future_target_mode, rng);
    if (log) log->flow_losses.push_back(terms);
  }
}

OccupancyTrainResult train_occupancy(const envs::EmbeddedDataset& data, const OccupancyTrainConfig& config,
                                     const Rng& rng) {
  if (data.empty()) throw std::invalid_argument("cannot train the occupancy model on an empty dataset");
  Rng init = rng.split("init");
  OccupancyTrainResult result{VelocityFieldNet(data.state_dim(), data.action_dim(), config.hidden, config.layer_norm,
                                               init, config.lr, config.target_rate),
                              {},
                              {}};
  Rng stream = rng.split("train");
  continue_training(result.net, data, config, stream, &result);
  return result;
}

}  // namespace ors::flow
