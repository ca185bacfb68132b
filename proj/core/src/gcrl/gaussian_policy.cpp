#include "ors/gcrl/gaussian_policy.hpp"

#include <cmath>
#include <numbers>

#include "ors/common/error.hpp"

namespace ors::gcrl {

GaussianPolicy::GaussianPolicy(int state_dim_, int action_dim_, const std::vector<int>& hidden, bool layer_norm,
                               Rng& rng, double lr)
    : state_dim(state_dim_), action_dim(action_dim_) {
  std::vector<int> widths{2 * state_dim};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(2 * action_dim);
  net = nn::Mlp::build(widths, layer_norm, rng);
  adam = nn::AdamState::zeros(static_cast<Eigen::Index>(net.num_params()), lr);
}

GaussianPolicy::Output GaussianPolicy::forward(const Eigen::MatrixXd& s, const Eigen::MatrixXd& g,
                                               nn::ForwardCache* cache) const {
  if (s.rows() != state_dim || g.rows() != state_dim || s.cols() != g.cols())
    throw ShapeError("policy input shape");
  Eigen::MatrixXd in(2 * state_dim, s.cols());
  in << s, g;
  Output out;
  out.raw = net.forward_batch(in, cache);
  out.mean = out.raw.topRows(action_dim).array().tanh().matrix();
  out.log_std = out.raw.bottomRows(action_dim).cwiseMax(log_std_min).cwiseMin(log_std_max);
  if (!out.mean.allFinite() || !out.log_std.allFinite()) throw NumericError("policy produced a non-finite output");
  return out;
}

Eigen::VectorXd GaussianPolicy::mean_action(const Eigen::VectorXd& s, const Eigen::VectorXd& g) const {
  return forward(s, g).mean.col(0);
}

Eigen::VectorXd GaussianPolicy::sample(const Eigen::VectorXd& s, const Eigen::VectorXd& g, Rng& rng) const {
  const auto out = forward(s, g);
  Eigen::VectorXd a(action_dim);
  for (int i = 0; i < action_dim; ++i) a(i) = out.mean(i, 0) + std::exp(out.log_std(i, 0)) * rng.normal();
  return a;
}

Eigen::VectorXd GaussianPolicy::log_prob(const Output& out, const Eigen::MatrixXd& a) const {
  const Eigen::ArrayXXd z = (a - out.mean).array() / out.log_std.array().exp();
  const double c = 0.5 * std::log(2.0 * std::numbers::pi);
  return (-0.5 * z.square() - out.log_std.array() - c).colwise().sum().transpose();
}

Eigen::MatrixXd GaussianPolicy::log_prob_raw_grad(const Output& out, const Eigen::MatrixXd& a,
                                                  const Eigen::VectorXd& w) const {
  const Eigen::ArrayXXd sigma = out.log_std.array().exp();
  const Eigen::ArrayXXd z = (a - out.mean).array() / sigma;
  Eigen::MatrixXd grad(2 * action_dim, a.cols());
  const Eigen::ArrayXXd dmean = z / sigma;
  grad.topRows(action_dim) = (dmean * (1.0 - out.mean.array().square())).matrix();
  Eigen::ArrayXXd dls = z.square() - 1.0;
  const Eigen::ArrayXXd raw_ls = out.raw.bottomRows(action_dim).array();
  dls = (raw_ls < log_std_min || raw_ls > log_std_max).select(0.0, dls);
  grad.bottomRows(action_dim) = dls.matrix();
  return grad * w.asDiagonal();
}

Eigen::MatrixXd GaussianPolicy::mean_raw_grad(const Output& out, const Eigen::MatrixXd& dmean) const {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(2 * action_dim, dmean.cols());
  grad.topRows(action_dim) = (dmean.array() * (1.0 - out.mean.array().square())).matrix();
  return grad;
}

}  // namespace ors::gcrl
