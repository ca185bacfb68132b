#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ors/envs/mdp.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/reward/reward_net.hpp"

namespace ors::reward {

/// r^W(s, a, g) / scale, read either from an exact M table or from a distilled net.
class ShapedRewardSource {
 public:
  enum class Kind { exact_table, distilled_net };

  static ShapedRewardSource exact(envs::DeterministicMdp mdp, exact::WassersteinTable m, double scale);
  /// `mdp` lets discrete (state id, action id) queries go through the net.
  static ShapedRewardSource distilled(RewardNet net, std::optional<envs::DeterministicMdp> mdp = std::nullopt);

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept;

  /// Discrete query. Exact mode rejects states, actions or goals outside the table.
  double operator()(int s, int a, int g) const;
  /// Continuous query. Exact mode maps the vectors back to state / action ids
  /// (actions as one-hot) and rejects anything that does not match exactly.
  double operator()(const Eigen::VectorXd& s, const Eigen::VectorXd& a, const Eigen::VectorXd& g) const;
  /// One reward per column.
  Eigen::VectorXd batch(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) const;

  /// Dense table over all (s, a) for the listed goals (discrete sources only).
  exact::RewardTable table(const std::vector<int>& goals) const;

 private:
  Kind kind_ = Kind::exact_table;
  std::optional<envs::DeterministicMdp> mdp_;
  std::optional<exact::WassersteinTable> m_;
  double scale_ = 1.0;
  std::optional<RewardNet> net_;
};

double shaped_reward(const ShapedRewardSource& src, int s, int a, int g);
double shaped_reward(const ShapedRewardSource& src, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& g);

}  // namespace ors::reward
