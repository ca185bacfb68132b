#include "ors/gcrl/expectile.hpp"

#include <stdexcept>

namespace ors::gcrl {

namespace {

double weight(double u, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("expectile kappa must lie in (0, 1)");
  return u < 0.0 ? 1.0 - kappa : kappa;
}

}  // namespace

double expectile_loss(double u, double kappa) { return weight(u, kappa) * u * u; }

double expectile_grad(double u, double kappa) { return 2.0 * weight(u, kappa) * u; }

double expectile_loss_mean(std::span<const double> residuals, double kappa) {
  if (residuals.empty()) return 0.0;
  double total = 0.0;
  for (double u : residuals) total += expectile_loss(u, kappa);
  return total / static_cast<double>(residuals.size());
}

}  // namespace ors::gcrl
