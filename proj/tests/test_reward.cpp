#include <cmath>

#include <gtest/gtest.h>

#include "ors/common/error.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/envs/grid_maze.hpp"
#include "ors/envs/layers.hpp"
#include "ors/exact/occupancy.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/flow/velocity_field.hpp"
#include "ors/reward/prop2.hpp"
#include "ors/reward/reward_net.hpp"
#include "ors/reward/shaped_reward.hpp"
#include "ors/reward/w2_estimate.hpp"

using namespace ors;
using namespace ors::reward;

namespace {

flow::VelocityFieldNet zero_field(int sd, int ad) {
  return flow::VelocityFieldNet(nn::Mlp({nn::LayerSpec{1 + 2 * sd + ad, sd, nn::Activation::identity, false}}), sd,
                                ad);
}

}  // namespace

TEST(W2Estimate, ZeroFieldGivesDimensionAtOrigin) {
  // v = 0 and g = 0: |g - x0|^2 = |x0|^2 with mean d
  for (int d : {1, 2, 5}) {
    const auto net = zero_field(d, 2);
    Rng rng(static_cast<std::uint64_t>(d));
    const auto est = estimate_w2_mse(net, Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(2),
                                     Eigen::VectorXd::Zero(d), 40000, rng);
    EXPECT_NEAR(est.estimate, d, 4.0 * est.standard_error);
    // Var |x0|^2 = 2d, so SE = sqrt(2d / n)
    EXPECT_NEAR(est.standard_error, std::sqrt(2.0 * d / 40000.0), 0.1 * std::sqrt(2.0 * d / 40000.0));
  }
}

TEST(W2Estimate, StandardErrorShrinksLikeOneOverRootN) {
  const auto net = zero_field(2, 1);
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(2), a = Eigen::VectorXd::Zero(1), g = Eigen::VectorXd::Ones(2);
  Rng r1(7), r2(8);
  const double se1 = estimate_w2_mse(net, s, a, g, 2000, r1).standard_error;
  const double se4 = estimate_w2_mse(net, s, a, g, 8000, r2).standard_error;
  EXPECT_NEAR(se1 / se4, 2.0, 0.25);
  Rng r3(9);
  EXPECT_EQ(estimate_w2_mse(net, s, a, g, 1, r3).standard_error, 0.0);
}

TEST(W2Estimate, HandComputedConstantField) {
  nn::Mlp net({nn::LayerSpec{1 + 2 + 1, 1, nn::Activation::identity, false}});
  net.bias(0)(0) = 0.5;
  const Eigen::MatrixXd s = Eigen::MatrixXd::Zero(1, 2), a = Eigen::MatrixXd::Zero(1, 2);
  Eigen::MatrixXd g(1, 2);
  g << 1.0, 3.0;
  Eigen::MatrixXd x0(1, 2);
  x0 << 0.0, -1.0;
  Eigen::RowVectorXd t(2);
  t << 0.25, 0.75;
  const Eigen::VectorXd est = estimate_w2_with_noise(net, s, a, g, x0, t);
  // column j, draw k: (0.5 - (g_j - x0_k))^2, averaged over k
  EXPECT_NEAR(est(0), 0.5 * (0.25 + 2.25), 1e-14);
  EXPECT_NEAR(est(1), 0.5 * (6.25 + 12.25), 1e-14);
}

TEST(W2Estimate, SharedNoiseAndMonteCarloConsistency) {
  Rng init(10);
  const flow::VelocityFieldNet net(2, 3, {16}, true, init);
  Rng rng(11);
  const Eigen::MatrixXd s = rng.normal_matrix(2, 1), a = rng.normal_matrix(3, 1), g = rng.normal_matrix(2, 1);
  Eigen::MatrixXd s2(2, 2), a2(3, 2), g2(2, 2);
  s2 << s, s;
  a2 << a, a;
  g2 << g, g;
  Rng r1(12);
  const Eigen::VectorXd twin = estimate_w2_batch(net.online, s2, a2, g2, 64, r1);
  EXPECT_EQ(twin(0), twin(1));

  Rng r2(13), r3(14);
  const auto single = estimate_w2_mse(net, s.col(0), a.col(0), g.col(0), 50000, r2);
  const double batched = estimate_w2_batch(net.online, s, a, g, 50000, r3)(0);
  EXPECT_NEAR(single.estimate, batched, 5.0 * single.standard_error);
}

TEST(W2Estimate, RejectsBadArguments) {
  const auto net = zero_field(2, 1);
  Rng rng(1);
  EXPECT_THROW(estimate_w2_mse(net, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2), 0,
                               rng),
               std::invalid_argument);
  EXPECT_THROW(estimate_w2_mse(net, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2), 4,
                               rng),
               ShapeError);
}

TEST(ShapedReward, ExactSourceScalesAndReadsZeroAtAbsorbingGoal) {
  const auto mdp = envs::GridMaze::chain(5).to_mdp(0.99).with_absorbing_goal(4);
  const auto pi = envs::layer_monotone_policy(mdp, envs::compute_layers(mdp, 4));
  const auto occ = exact::solve_occupancy(mdp, pi, 0.99);
  const auto m = exact::wasserstein_all_goals(occ, mdp);
  const auto one = ShapedRewardSource::exact(mdp, m, 1.0);
  const auto two = ShapedRewardSource::exact(mdp, m, 2.0);
  EXPECT_NEAR(one(3, envs::kRight, 4), 0.0, 1e-12);
  EXPECT_LT(one(2, envs::kLeft, 4), 0.0);
  for (int s = 0; s < 5; ++s)
    for (int a = 0; a < 5; ++a) EXPECT_DOUBLE_EQ(two(s, a, 4), 0.5 * one(s, a, 4));
  // vector queries map back to table entries
  EXPECT_DOUBLE_EQ(one(mdp.embedding(1), envs::one_hot(envs::kRight, 5), mdp.embedding(4)), one(1, envs::kRight, 4));
  EXPECT_THROW(one(Eigen::Vector2d(0.0, 0.5), envs::one_hot(0, 5), mdp.embedding(4)), std::out_of_range);
  EXPECT_ANY_THROW(one(7, 0, 4));
  EXPECT_THROW(ShapedRewardSource::exact(mdp, m, 0.0), std::invalid_argument);
  const auto table = one.table({4});
  EXPECT_DOUBLE_EQ(table.at(2, envs::kLeft, 4), one(2, envs::kLeft, 4));
}

TEST(ShapedReward, DistilledSourceDividesByNetScale) {
  Rng rng(15);
  const auto mdp = envs::GridMaze::chain(3).to_mdp(0.9);
  RewardNet base(2, 5, {8}, false, rng, 3e-4, 1.0);
  base.net.bias(1)(0) = -4.0;
  RewardNet halved = base;
  halved.scale = 2.0;
  const auto a = ShapedRewardSource::distilled(base, mdp);
  const auto b = ShapedRewardSource::distilled(halved, mdp);
  for (int s = 0; s < 3; ++s) EXPECT_DOUBLE_EQ(b(s, 1, 2), 0.5 * a(s, 1, 2));
  EXPECT_THROW(ShapedRewardSource::distilled(base)(0, 0, 0), std::logic_error);
}

TEST(RewardTraining, ReproducibleAndLossesRecorded) {
  const auto mdp = envs::GridMaze::chain(4).to_mdp(0.9);
  const auto data = envs::embed(mdp, envs::generate_dataset(mdp, envs::PolicySpec{}, 4, 20, Rng(1)));
  Rng init(2);
  const flow::VelocityFieldNet occ(2, 5, {16}, true, init);
  RewardTrainConfig cfg;
  cfg.hidden = {16};
  cfg.steps = 30;
  cfg.batch_size = 16;
  cfg.mc_draws = 8;
  cfg.sampler.gamma = 0.9;
  std::vector<double> la, lb;
  const auto a = train_reward(occ, data, cfg, Rng(3), &la);
  const auto b = train_reward(occ, data, cfg, Rng(3), &lb);
  EXPECT_EQ(a.net.params(), b.net.params());
  ASSERT_EQ(la.size(), 30u);
  EXPECT_EQ(la, lb);
  EXPECT_THROW(train_reward(occ, envs::EmbeddedDataset{}, cfg, Rng(3)), std::invalid_argument);
}

TEST(Prop2, UntrainedNetworkProducesAFiniteReport) {
  const auto mdp = envs::GridMaze::chain(3).to_mdp(0.9);
  const auto occ = exact::solve_occupancy(mdp, envs::uniform_policy(mdp), 0.9);
  const auto m = exact::wasserstein_all_goals(occ, mdp);
  Rng init(4);
  const flow::VelocityFieldNet net(2, 5, {16}, true, init);
  Rng rng(5);
  const auto triples = all_triples(mdp);
  ASSERT_EQ(triples.size(), 3u * 5u * 3u);
  const auto rep = validate_prop2(net, mdp, m, triples, 16, rng);
  EXPECT_EQ(rep.triples, 45);
  EXPECT_EQ(rep.exact.size(), 45u);
  EXPECT_EQ(rep.estimate.size(), 45u);
  EXPECT_TRUE(std::isfinite(rep.spearman_rho));
  EXPECT_GE(rep.spearman_rho, -1.0);
  EXPECT_LE(rep.spearman_rho, 1.0);
  EXPECT_TRUE(rep.violations.empty());  // a random net never has exactly zero MSE
  EXPECT_NO_THROW(rep.to_json().dump());
}
