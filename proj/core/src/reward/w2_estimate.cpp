#include "ors/reward/w2_estimate.hpp"

#include <cmath>
#include <stdexcept>

#include "ors/common/error.hpp"

namespace ors::reward {

W2Estimate estimate_w2_mse(const flow::VelocityFieldNet& net, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& g, int n_draws, Rng& rng) {
  if (n_draws < 1) throw std::invalid_argument("n_draws must be at least 1");
  if (s.size() != net.state_dim || g.size() != net.state_dim || a.size() != net.action_dim)
    throw ShapeError("estimate_w2_mse: (s, a, g) shape");
  const Eigen::MatrixXd x0 = rng.normal_matrix(net.state_dim, n_draws);
  Eigen::RowVectorXd t(n_draws);
  for (int i = 0; i < n_draws; ++i) t(i) = rng.uniform();
  const Eigen::MatrixXd gs = g.replicate(1, n_draws);
  const Eigen::MatrixXd xt = x0 * (1.0 - t.array()).matrix().asDiagonal() + gs * t.asDiagonal();
  const Eigen::MatrixXd v = flow::velocity(net.online, t, s.replicate(1, n_draws), a.replicate(1, n_draws), xt);
  const Eigen::RowVectorXd err = (v - (gs - x0)).colwise().squaredNorm();
  W2Estimate out;
  out.draws = n_draws;
  out.estimate = err.mean();
  if (n_draws > 1) {
    const double var = (err.array() - out.estimate).square().sum() / (n_draws - 1);
    out.standard_error = std::sqrt(var / n_draws);
  }
  return out;
}

Eigen::VectorXd estimate_w2_with_noise(const nn::Mlp& velocity_net, const Eigen::MatrixXd& s,
                                       const Eigen::MatrixXd& a, const Eigen::MatrixXd& g, const Eigen::MatrixXd& x0,
                                       const Eigen::RowVectorXd& t) {
  const Eigen::Index n = s.cols();
  const Eigen::Index draws = t.size();
  if (a.cols() != n || g.cols() != n || x0.cols() != draws || x0.rows() != g.rows())
    throw ShapeError("estimate_w2_with_noise: shape mismatch");
  // Column j * draws + k pairs triple j with noise draw k.
  Eigen::MatrixXd ss(s.rows(), n * draws), as(a.rows(), n * draws), xt(g.rows(), n * draws), target(g.rows(), n * draws);
  Eigen::RowVectorXd ts(n * draws);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < draws; ++k) {
      const Eigen::Index c = j * draws + k;
      ss.col(c) = s.col(j);
      as.col(c) = a.col(j);
      xt.col(c) = t(k) * g.col(j) + (1.0 - t(k)) * x0.col(k);
      target.col(c) = g.col(j) - x0.col(k);
      ts(c) = t(k);
    }
  const Eigen::MatrixXd v = flow::velocity(velocity_net, ts, ss, as, xt);
  const Eigen::RowVectorXd err = (v - target).colwise().squaredNorm();
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < n; ++j) out(j) = err.segment(j * draws, draws).mean();
  return out;
}

Eigen::VectorXd estimate_w2_batch(const nn::Mlp& velocity_net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& g, int n_draws, Rng& rng) {
  if (n_draws < 1) throw std::invalid_argument("n_draws must be at least 1");
  const Eigen::MatrixXd x0 = rng.normal_matrix(g.rows(), n_draws);
  Eigen::RowVectorXd t(n_draws);
  for (int i = 0; i < n_draws; ++i) t(i) = rng.uniform();
  return estimate_w2_with_noise(velocity_net, s, a, g, x0, t);
}

}  // namespace ors::reward
