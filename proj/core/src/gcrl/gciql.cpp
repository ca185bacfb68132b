#include "ors/gcrl/gciql.hpp"

#include <string>

#include "ors/common/error.hpp"
#include "ors/gcrl/expectile.hpp"

namespace ors::gcrl {

namespace {

nn::Mlp scalar_net(int in, const GciqlConfig& config, Rng& rng) {
  std::vector<int> widths{in};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(1);
  return nn::Mlp::build(widths, config.layer_norm, rng);
}

void check_finite(const Eigen::VectorXd& values, const char* what) {
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values(i)))
      throw NumericError(std::string("non-finite ") + what + " at batch index " + std::to_string(i));
}

}  // namespace

ExpectileCritic::ExpectileCritic(int state_dim_, int action_dim_, const GciqlConfig& config, Rng& rng)
    : kappa(config.kappa), gamma(config.gamma), state_dim(state_dim_), action_dim(action_dim_) {
  v = scalar_net(2 * state_dim, config, rng);
  q1 = scalar_net(2 * state_dim + action_dim, config, rng);
  q2 = scalar_net(2 * state_dim + action_dim, config, rng);
  q1_target = nn::TargetCopy::of(q1, config.target_rate);
  q2_target = nn::TargetCopy::of(q2, config.target_rate);
  v_adam = nn::AdamState::zeros(static_cast<Eigen::Index>(v.num_params()), config.lr);
  q1_adam = nn::AdamState::zeros(static_cast<Eigen::Index>(q1.num_params()), config.lr);
  q2_adam = nn::AdamState::zeros(static_cast<Eigen::Index>(q2.num_params()), config.lr);
}

Eigen::MatrixXd critic_inputs(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) {
  if (a.cols() != s.cols() || g.cols() != s.cols()) throw ShapeError("critic inputs: batch sizes differ");
  Eigen::MatrixXd in(s.rows() + a.rows() + g.rows(), s.cols());
  in << s, a, g;
  return in;
}

Eigen::VectorXd ExpectileCritic::value(const Eigen::MatrixXd& s, const Eigen::MatrixXd& g) const {
  Eigen::MatrixXd in(s.rows() + g.rows(), s.cols());
  in << s, g;
  return v.forward_batch(in).row(0).transpose();
}

Eigen::VectorXd ExpectileCritic::q(const nn::Mlp& net, const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& g) const {
  return net.forward_batch(critic_inputs(s, a, g)).row(0).transpose();
}

Eigen::VectorXd ExpectileCritic::target_q_min(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                              const Eigen::MatrixXd& g) const {
  return q(q1_target.shadow, s, a, g).cwiseMin(q(q2_target.shadow, s, a, g));
}

GciqlLosses gciql_step(ExpectileCritic& critic, GaussianPolicy& policy, const GciqlBatch& batch,
                       const GciqlConfig& config) {
  const Eigen::Index n = batch.s.cols();
  if (n == 0) throw std::invalid_argument("empty GCIQL batch");
  if (batch.reward.size() != n || batch.mask.size() != n) throw ShapeError("rewards and masks must match the batch");
  check_finite(batch.reward, "reward");
  const double inv_n = 1.0 / static_cast<double>(n);
  GciqlLosses losses;

  // Value: expectile regression toward min of the target Qs.
  {
    const Eigen::VectorXd target = critic.target_q_min(batch.s, batch.a, batch.g);
    Eigen::MatrixXd in(2 * critic.state_dim, n);
    in << batch.s, batch.g;
    nn::ForwardCache cache;
    const Eigen::VectorXd pred = critic.v.forward_batch(in, &cache).row(0).transpose();
    const Eigen::VectorXd u = target - pred;
    check_finite(u, "value residual");
    Eigen::MatrixXd dy(1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      losses.v += expectile_loss(u(i), critic.kappa) * inv_n;
      dy(0, i) = -expectile_grad(u(i), critic.kappa) * inv_n;
    }
    nn::adam_step(critic.v.params(), critic.v.backward(cache, dy).params, critic.v_adam);
  }

  // Q: TD regression r + gamma * mask * V(s', g), V after its update.
  {
    const Eigen::VectorXd target =
        batch.reward + critic.gamma * batch.mask.cwiseProduct(critic.value(batch.s_next, batch.g));
    const Eigen::MatrixXd in = critic_inputs(batch.s, batch.a, batch.g);
    for (auto [net, adam] : {std::pair{&critic.q1, &critic.q1_adam}, std::pair{&critic.q2, &critic.q2_adam}}) {
      nn::ForwardCache cache;
      const Eigen::VectorXd pred = net->forward_batch(in, &cache).row(0).transpose();
      const Eigen::VectorXd e = pred - target;
      check_finite(e, "Q residual");
      losses.q += e.squaredNorm() * inv_n;
      nn::adam_step(net->params(), net->backward(cache, (2.0 * inv_n) * e.transpose()).params, *adam);
    }
  }

  // Actor: maximise Q(s, mu(s, g), g) / mean|Q| + alpha log pi(a | s, g).
  {
    const Eigen::MatrixXd& g = batch.actor_g.size() ? batch.actor_g : batch.g;
    nn::ForwardCache cache;
    const auto out = policy.forward(batch.s, g, &cache);
    const Eigen::MatrixXd in = critic_inputs(batch.s, out.mean, g);
    nn::ForwardCache c1, c2;
    const Eigen::VectorXd q1 = critic.q1.forward_batch(in, &c1).row(0).transpose();
    const Eigen::VectorXd q2 = critic.q2.forward_batch(in, &c2).row(0).transpose();
    const Eigen::VectorXd qmin = q1.cwiseMin(q2);
    const double lambda = std::max(qmin.cwiseAbs().mean(), 1e-8);
    const Eigen::VectorXd logp = policy.log_prob(out, batch.a);
    check_finite(logp, "log-probability");
    losses.pi = -(config.q_weight * qmin.mean() / lambda + config.alpha * logp.mean());

    // dL/dmean via the Q term: only the smaller Q head contributes.
    Eigen::MatrixXd dy1 = Eigen::MatrixXd::Zero(1, n), dy2 = Eigen::MatrixXd::Zero(1, n);
    for (Eigen::Index i = 0; i < n; ++i) (q1(i) <= q2(i) ? dy1 : dy2)(0, i) = -config.q_weight * inv_n / lambda;
    const Eigen::MatrixXd din = critic.q1.backward(c1, dy1).input + critic.q2.backward(c2, dy2).input;
    const Eigen::MatrixXd dmean = din.middleRows(critic.state_dim, critic.action_dim);
    Eigen::MatrixXd draw = policy.mean_raw_grad(out, dmean);
    draw -= policy.log_prob_raw_grad(out, batch.a, Eigen::VectorXd::Constant(n, config.alpha * inv_n));
    nn::adam_step(policy.net.params(), policy.net.backward(cache, draw).params, policy.adam);
  }

  nn::polyak_update(critic.q1_target, critic.q1);
  nn::polyak_update(critic.q2_target, critic.q2);
  return losses;
}

}  // namespace ors::gcrl
