#pragma once

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/flow/velocity_field.hpp"

namespace ors::reward {

struct W2Estimate {
  double estimate = 0.0;        ///< mean of |v(t, s, a, x_t) - (g - x_0)|^2
  double standard_error = 0.0;
  int draws = 0;
};

/// Monte-Carlo velocity MSE against the straight path to g:
/// x_0 ~ N(0, I), t ~ U(0, 1), x_t = t g + (1 - t) x_0.
W2Estimate estimate_w2_mse(const flow::VelocityFieldNet& net, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& g, int n_draws, Rng& rng);

/// Same estimate for many (s, a, g) columns at once; noise (x_0, t) is drawn
/// once and shared by every column (common random numbers).
Eigen::VectorXd estimate_w2_batch(const nn::Mlp& velocity_net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& g, int n_draws, Rng& rng);

/// Per-column estimates under explicitly supplied noise (x0: dim x draws, t: draws).
Eigen::VectorXd estimate_w2_with_noise(const nn::Mlp& velocity_net, const Eigen::MatrixXd& s,
                                       const Eigen::MatrixXd& a, const Eigen::MatrixXd& g, const Eigen::MatrixXd& x0,
                                       const Eigen::RowVectorXd& t);

}  // namespace ors::reward
