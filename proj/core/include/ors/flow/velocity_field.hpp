#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/envs/mdp.hpp"
#include "ors/nn/adam.hpp"
#include "ors/nn/mlp.hpp"
#include "ors/nn/target_copy.hpp"

namespace ors::flow {

/// v_theta(t, s, a, x_t) as an MLP on the concatenation [t; s; a; x_t], with
/// a Polyak target copy and its own Adam state.
struct VelocityFieldNet {
  nn::Mlp online;
  nn::TargetCopy target;
  nn::AdamState adam;
  int state_dim = 0;
  int action_dim = 0;

  VelocityFieldNet() = default;
  VelocityFieldNet(int state_dim, int action_dim, const std::vector<int>& hidden, bool layer_norm, Rng& rng,
                   double lr = 3e-4, double target_rate = 0.005);
  /// Wraps an existing network; the target starts as an exact copy.
  VelocityFieldNet(nn::Mlp net, int state_dim, int action_dim, double lr = 3e-4, double target_rate = 0.005);

  int input_dim() const noexcept { return 1 + 2 * state_dim + action_dim; }
};

/// Column-stacked [t; s; a; x].
Eigen::MatrixXd flow_inputs(const Eigen::RowVectorXd& t, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& x);

/// Velocity of `net` for a batch (one column per element).
Eigen::MatrixXd velocity(const nn::Mlp& net, const Eigen::RowVectorXd& t, const Eigen::MatrixXd& s,
                         const Eigen::MatrixXd& a, const Eigen::MatrixXd& x);

/// Integrates dx/dt = v(t, s, a, x) from x0 at t = 0 to t = `until` with
/// `steps` uniform Euler steps of size 1 / steps (the last one shortened when
/// `until` is not a grid point). Each column has its own (s, a). Throws
/// NumericError naming the first diverging column.
Eigen::MatrixXd euler_integrate(const nn::Mlp& net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                Eigen::MatrixXd x0, int steps, const Eigen::RowVectorXd* until = nullptr);

/// n_samples futures of a single (s, a) from the online net.
Eigen::MatrixXd sample_future(const VelocityFieldNet& net, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                              int n_samples, int flow_steps, Rng& rng);

/// Distribution over states of n_samples futures of (s, a), each snapped to
/// the nearest state embedding. Discrete actions are fed as one-hot vectors.
Eigen::VectorXd snapped_occupancy(const VelocityFieldNet& net, const envs::DeterministicMdp& mdp, int s, int a,
                                  int n_samples, int flow_steps, Rng& rng);

}  // namespace ors::flow
