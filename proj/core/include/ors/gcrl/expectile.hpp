#pragma once

#include <span>

namespace ors::gcrl {

/// l2_kappa(u) = |kappa - 1[u < 0]| u^2, with u = target - prediction.
double expectile_loss(double u, double kappa);
/// d l2_kappa / du.
double expectile_grad(double u, double kappa);
double expectile_loss_mean(std::span<const double> residuals, double kappa);

}  // namespace ors::gcrl
