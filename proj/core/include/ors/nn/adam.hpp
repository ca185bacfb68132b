#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace ors::nn {

/// Bias-corrected Adam moments for one flat parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t step = 0;
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState zeros(Eigen::Index size, double lr = 3e-4);
};

/// One Adam update in place. Throws ShapeError on mismatched sizes and
/// NumericError (leaving params and state untouched) on non-finite gradients.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state);

}  // namespace ors::nn
