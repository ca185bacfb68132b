#include "ors/flow/velocity_field.hpp"

#include <algorithm>
#include <string>

#include "ors/common/error.hpp"

namespace ors::flow {

VelocityFieldNet::VelocityFieldNet(int state_dim_, int action_dim_, const std::vector<int>& hidden, bool layer_norm,
                                   Rng& rng, double lr, double target_rate)
    : state_dim(state_dim_), action_dim(action_dim_) {
  std::vector<int> widths{input_dim()};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(state_dim);
  online = nn::Mlp::build(widths, layer_norm, rng);
  target = nn::TargetCopy::of(online, target_rate);
  adam = nn::AdamState::zeros(static_cast<Eigen::Index>(online.num_params()), lr);
}

VelocityFieldNet::VelocityFieldNet(nn::Mlp net, int state_dim_, int action_dim_, double lr, double target_rate)
    : online(std::move(net)), state_dim(state_dim_), action_dim(action_dim_) {
  if (online.input_dim() != input_dim() || online.output_dim() != state_dim)
    throw ShapeError("velocity net must map [t; s; a; x] to a state-sized vector");
  target = nn::TargetCopy::of(online, target_rate);
  adam = nn::AdamState::zeros(static_cast<Eigen::Index>(online.num_params()), lr);
}

Eigen::MatrixXd flow_inputs(const Eigen::RowVectorXd& t, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& x) {
  const Eigen::Index n = t.size();
  if (s.cols() != n || a.cols() != n || x.cols() != n) throw ShapeError("flow inputs: batch sizes differ");
  Eigen::MatrixXd in(1 + s.rows() + a.rows() + x.rows(), n);
  in.row(0) = t;
  in.middleRows(1, s.rows()) = s;
  in.middleRows(1 + s.rows(), a.rows()) = a;
  in.bottomRows(x.rows()) = x;
  return in;
}

Eigen::MatrixXd velocity(const nn::Mlp& net, const Eigen::RowVectorXd& t, const Eigen::MatrixXd& s,
                         const Eigen::MatrixXd& a, const Eigen::MatrixXd& x) {
  return net.forward_batch(flow_inputs(t, s, a, x));
}

Eigen::MatrixXd euler_integrate(const nn::Mlp& net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                Eigen::MatrixXd x, int steps, const Eigen::RowVectorXd* until) {
  if (steps < 1) throw std::invalid_argument("flow_steps must be at least 1");
  const Eigen::Index n = x.cols();
  const double dt = 1.0 / steps;
  Eigen::RowVectorXd t = Eigen::RowVectorXd::Zero(n);
  for (int k = 0; k < steps; ++k) {
    Eigen::RowVectorXd h = Eigen::RowVectorXd::Constant(n, dt);
    if (until) {
      h = (*until - t).cwiseMin(dt).cwiseMax(0.0);
      if (h.maxCoeff() <= 0.0) break;
    }
    const Eigen::MatrixXd v = velocity(net, t, s, a, x);
    x += v * h.asDiagonal();
    t += h;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!x.col(j).allFinite())
        throw NumericError("Euler sample " + std::to_string(j) + " diverged at step " + std::to_string(k + 1));
  }
  return x;
}

Eigen::MatrixXd sample_future(const VelocityFieldNet& net, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                              int n_samples, int flow_steps, Rng& rng) {
  if (s.size() != net.state_dim || a.size() != net.action_dim) throw ShapeError("sample_future: (s, a) shape");
  const Eigen::MatrixXd x0 = rng.normal_matrix(net.state_dim, n_samples);
  return euler_integrate(net.online, s.replicate(1, n_samples), a.replicate(1, n_samples), x0, flow_steps);
}

Eigen::VectorXd snapped_occupancy(const VelocityFieldNet& net, const envs::DeterministicMdp& mdp, int s, int a,
                                  int n_samples, int flow_steps, Rng& rng) {
  Eigen::VectorXd action = Eigen::VectorXd::Zero(mdp.num_actions());
  action(a) = 1.0;
  const Eigen::MatrixXd x = sample_future(net, mdp.embedding(s), action, n_samples, flow_steps, rng);
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(mdp.num_states());
  for (Eigen::Index j = 0; j < x.cols(); ++j) hist(mdp.nearest_state(x.col(j))) += 1.0;
  return hist / static_cast<double>(n_samples);
}

}  // namespace ors::flow
