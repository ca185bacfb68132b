#include "ors/gcrl/tabular_gciql.hpp"

#include <algorithm>
#include <limits>

#include "ors/common/error.hpp"
#include "ors/gcrl/expectile.hpp"

namespace ors::gcrl {

void require_all_goals(const exact::RewardTable& reward, int num_states) {
  if (static_cast<int>(reward.goals.size()) != num_states) throw ShapeError("reward table must cover every goal");
  for (int g = 0; g < num_states; ++g)
    if (reward.goals[static_cast<std::size_t>(g)] != g) throw ShapeError("reward table goals must be 0..|S|-1");
}

TabularGciql::TabularGciql(const envs::DeterministicMdp& mdp, const envs::OfflineDataset& data, GciqlConfig config)
    : mdp_(&mdp), data_(&data), config_(std::move(config)) {
  if (data.empty()) throw std::invalid_argument("GCIQL needs a non-empty dataset");
  config_.critic_sampler.validate();
  const int n = mdp.num_states();
  v_ = Eigen::MatrixXd::Zero(n, n);
  q1_ = Eigen::MatrixXd::Zero(mdp.num_pairs(), n);
  q2_ = q1_;
  q1_bar_ = q1_;
  q2_bar_ = q2_;
  seen_actions_.assign(static_cast<std::size_t>(n), {});
  for (const auto& tr : data.tuples) seen_actions_[static_cast<std::size_t>(tr.s)].push_back(tr.a);
  for (auto& v : seen_actions_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

GciqlLosses TabularGciql::step(const exact::RewardTable& reward, Rng& rng) {
  const int na = mdp_->num_actions();
  std::vector<std::size_t> idx(static_cast<std::size_t>(config_.batch_size));
  for (auto& i : idx) i = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(data_->size())));
  const auto goals = sample_goals(data_->offsets, idx, config_.critic_sampler, rng);

  GciqlLosses losses;
  const double lr = config_.table_lr;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const auto& tr = data_->tuples[idx[j]];
    const auto& gref = goals[j];
    const auto& gt = data_->tuples[gref.tuple];
    const int g = gref.next ? gt.s_next : gt.s;
    const auto row = static_cast<Eigen::Index>(tr.s) * na + tr.a;

    const double u = std::min(q1_bar_(row, g), q2_bar_(row, g)) - v_(tr.s, g);
    losses.v += expectile_loss(u, config_.kappa);

    const double mask = tr.s == g ? 0.0 : 1.0;
    const double target = reward.r(row, g) + config_.gamma * mask * v_(tr.s_next, g);
    const double e1 = target - q1_(row, g);
    const double e2 = target - q2_(row, g);
    losses.q += e1 * e1 + e2 * e2;

    v_(tr.s, g) += lr * expectile_grad(u, config_.kappa) * 0.5;
    q1_(row, g) += lr * e1;
    q2_(row, g) += lr * e2;
  }
  const double rate = config_.target_rate;
  q1_bar_ = (1.0 - rate) * q1_bar_ + rate * q1_;
  q2_bar_ = (1.0 - rate) * q2_bar_ + rate * q2_;
  losses.v /= static_cast<double>(idx.size());
  losses.q /= static_cast<double>(idx.size());
  return losses;
}

void TabularGciql::train(const exact::RewardTable& reward, Rng& rng, std::vector<GciqlLosses>* log) {
  require_all_goals(reward, mdp_->num_states());
  if (reward.r.rows() != mdp_->num_pairs()) throw ShapeError("reward table does not fit the MDP");
  for (int i = 0; i < config_.steps; ++i) {
    const auto l = step(reward, rng);
    if (log) log->push_back(l);
  }
}

double TabularGciql::q_min(int s, int a, int g) const {
  const auto row = static_cast<Eigen::Index>(s) * mdp_->num_actions() + a;
  return std::min(q1_(row, g), q2_(row, g));
}

int TabularGciql::act(int s, int g) const {
  const auto& seen = seen_actions_[static_cast<std::size_t>(s)];
  int best = -1;
  double best_q = -std::numeric_limits<double>::infinity();
  auto consider = [&](int a) {
    const double q = q_min(s, a, g);
    if (q > best_q) best_q = q, best = a;
  };
  if (seen.empty())
    for (int a = 0; a < mdp_->num_actions(); ++a) consider(a);
  else
    for (int a : seen) consider(a);
  return best;
}

}  // namespace ors::gcrl
