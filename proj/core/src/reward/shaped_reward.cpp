#include "ors/reward/shaped_reward.hpp"

#include <stdexcept>

#include "ors/common/error.hpp"
#include "ors/envs/embedding.hpp"

namespace ors::reward {

ShapedRewardSource ShapedRewardSource::exact(envs::DeterministicMdp mdp, exact::WassersteinTable m, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("reward scale must be positive");
  if (m.pair.rows() != mdp.num_pairs()) throw ShapeError("M table does not fit the MDP");
  ShapedRewardSource src;
  src.kind_ = Kind::exact_table;
  src.mdp_ = std::move(mdp);
  src.m_ = std::move(m);
  src.scale_ = scale;
  return src;
}

ShapedRewardSource ShapedRewardSource::distilled(RewardNet net, std::optional<envs::DeterministicMdp> mdp) {
  ShapedRewardSource src;
  src.kind_ = Kind::distilled_net;
  src.scale_ = net.scale;
  src.net_ = std::move(net);
  src.mdp_ = std::move(mdp);
  return src;
}

double ShapedRewardSource::scale() const noexcept { return scale_; }

double ShapedRewardSource::operator()(int s, int a, int g) const {
  if (!mdp_) throw std::logic_error("discrete reward query needs an MDP");
  mdp_->validate_state(s);
  mdp_->validate_action(a);
  mdp_->validate_state(g);
  if (kind_ == Kind::exact_table) return -m_->at(s, a, g) / scale_;
  return net_->raw(mdp_->embedding(s), envs::one_hot(a, mdp_->num_actions()), mdp_->embedding(g)) / scale_;
}

double ShapedRewardSource::operator()(const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                                      const Eigen::VectorXd& g) const {
  if (kind_ == Kind::distilled_net) return net_->raw(s, a, g) / scale_;
  const int si = mdp_->state_at(s);
  const int gi = mdp_->state_at(g);
  if (si < 0 || gi < 0) throw std::out_of_range("state is not in the exact reward table");
  if (a.size() != mdp_->num_actions()) throw ShapeError("exact reward expects a one-hot action");
  Eigen::Index ai = 0;
  a.maxCoeff(&ai);
  if (a != envs::one_hot(static_cast<int>(ai), mdp_->num_actions()))
    throw std::out_of_range("action is not a one-hot vector");
  return (*this)(si, static_cast<int>(ai), gi);
}

Eigen::VectorXd ShapedRewardSource::batch(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& g) const {
  if (kind_ == Kind::distilled_net) return net_->raw(s, a, g) / scale_;
  Eigen::VectorXd out(s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    out(j) = (*this)(Eigen::VectorXd(s.col(j)), Eigen::VectorXd(a.col(j)), Eigen::VectorXd(g.col(j)));
  return out;
}

exact::RewardTable ShapedRewardSource::table(const std::vector<int>& goals) const {
  if (!mdp_) throw std::logic_error("reward table needs an MDP");
  const auto& mdp = *mdp_;
  exact::RewardTable r;
  r.goals = goals;
  r.num_actions = mdp.num_actions();
  r.scale = scale_;
  r.r.resize(mdp.num_pairs(), static_cast<Eigen::Index>(goals.size()));
  if (kind_ == Kind::exact_table) {
    for (std::size_t j = 0; j < goals.size(); ++j)
      r.r.col(static_cast<Eigen::Index>(j)) = -m_->pair.col(m_->column_of(goals[j])) / scale_;
    return r;
  }
  Eigen::MatrixXd s(mdp.embedding_dim(), mdp.num_pairs()), a(mdp.num_actions(), mdp.num_pairs());
  for (int st = 0; st < mdp.num_states(); ++st)
    for (int ac = 0; ac < mdp.num_actions(); ++ac) {
      s.col(st * mdp.num_actions() + ac) = mdp.embedding(st);
      a.col(st * mdp.num_actions() + ac) = envs::one_hot(ac, mdp.num_actions());
    }
  for (std::size_t j = 0; j < goals.size(); ++j) {
    const Eigen::MatrixXd g = mdp.embedding(goals[j]).replicate(1, mdp.num_pairs());
    r.r.col(static_cast<Eigen::Index>(j)) = net_->raw(s, a, g) / scale_;
  }
  return r;
}

double shaped_reward(const ShapedRewardSource& src, int s, int a, int g) { return src(s, a, g); }

double shaped_reward(const ShapedRewardSource& src, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& g) {
  return src(s, a, g);
}

}  // namespace ors::reward
