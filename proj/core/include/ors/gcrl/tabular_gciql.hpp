#pragma once

#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/envs/dataset.hpp"
#include "ors/envs/mdp.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/gcrl/goal_sampler.hpp"

namespace ors::gcrl {

struct GciqlConfig {
  double kappa = 0.6;
  double alpha = 0.3;
  double gamma = 0.99;
  int batch_size = 256;
  int steps = 20000;
  double lr = 3e-4;            ///< Adam rate for networks
  double table_lr = 0.1;       ///< per-sample step size for tabular critics
  double target_rate = 0.005;
  double q_weight = 1.0;       ///< multiplier on the actor's Q term (0 leaves pure behaviour cloning)
  std::vector<int> hidden{64, 64};
  bool layer_norm = true;
  GoalSampler critic_sampler{0.2, 0.5, 0.3, true, 0.99};
  GoalSampler actor_sampler{0.0, 1.0, 0.0, true, 0.99};
};

struct GciqlLosses {
  double v = 0.0;
  double q = 0.0;
  double pi = 0.0;
};

/// GCIQL on lookup tables: V(s, g), double Q(s, a, g) and Polyak target Qs.
/// V regresses with the expectile loss toward min(Qbar1, Qbar2); each Q
/// regresses toward r(s, a, g) + gamma 1[s != g] V(s', g). The policy is the
/// greedy action under min(Q1, Q2) among actions the dataset shows at s
/// (lowest id on ties).
class TabularGciql {
 public:
  TabularGciql(const envs::DeterministicMdp& mdp, const envs::OfflineDataset& data, GciqlConfig config);

  /// `reward` must list every state as a goal, in order.
  GciqlLosses step(const exact::RewardTable& reward, Rng& rng);
  void train(const exact::RewardTable& reward, Rng& rng, std::vector<GciqlLosses>* log = nullptr);

  int act(int s, int g) const;
  double q_min(int s, int a, int g) const;
  double value(int s, int g) const { return v_(s, g); }
  const GciqlConfig& config() const noexcept { return config_; }

 private:
  const envs::DeterministicMdp* mdp_;
  const envs::OfflineDataset* data_;
  GciqlConfig config_;
  Eigen::MatrixXd v_;             // |S| x |S|
  Eigen::MatrixXd q1_, q2_;       // |S||A| x |S|
  Eigen::MatrixXd q1_bar_, q2_bar_;
  std::vector<std::vector<int>> seen_actions_;
};

/// Checks that `reward` holds the columns 0..|S|-1 in order.
void require_all_goals(const exact::RewardTable& reward, int num_states);

}  // namespace ors::gcrl
