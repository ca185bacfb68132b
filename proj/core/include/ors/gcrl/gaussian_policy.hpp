#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/nn/adam.hpp"
#include "ors/nn/mlp.hpp"

namespace ors::gcrl {

/// pi(a | s, g) = N(tanh(m(s, g)), diag(exp(2 l(s, g)))), with l clamped to
/// [log_std_min, log_std_max]. The network outputs [m; l].
struct GaussianPolicy {
  nn::Mlp net;
  nn::AdamState adam;
  int state_dim = 0;
  int action_dim = 0;
  double log_std_min = -5.0;
  double log_std_max = 2.0;

  GaussianPolicy() = default;
  GaussianPolicy(int state_dim, int action_dim, const std::vector<int>& hidden, bool layer_norm, Rng& rng,
                 double lr = 3e-4);

  struct Output {
    Eigen::MatrixXd mean;     ///< tanh of the raw mean, in (-1, 1)
    Eigen::MatrixXd log_std;  ///< clamped
    Eigen::MatrixXd raw;      ///< network output before squashing / clamping
  };

  Output forward(const Eigen::MatrixXd& s, const Eigen::MatrixXd& g, nn::ForwardCache* cache = nullptr) const;
  Eigen::VectorXd mean_action(const Eigen::VectorXd& s, const Eigen::VectorXd& g) const;
  Eigen::VectorXd sample(const Eigen::VectorXd& s, const Eigen::VectorXd& g, Rng& rng) const;

  /// log pi(a | s, g) per column.
  Eigen::VectorXd log_prob(const Output& out, const Eigen::MatrixXd& a) const;
  /// d(sum_j w_j log pi(a_j | .)) / d raw output.
  Eigen::MatrixXd log_prob_raw_grad(const Output& out, const Eigen::MatrixXd& a, const Eigen::VectorXd& w) const;
  /// d(sum_j <dmean_j, mean_j>) / d raw output.
  Eigen::MatrixXd mean_raw_grad(const Output& out, const Eigen::MatrixXd& dmean) const;
};

}  // namespace ors::gcrl
