#include <cmath>

#include <gtest/gtest.h>

#include "ors/common/error.hpp"
#include "ors/envs/dataset.hpp"
#include "ors/envs/grid_maze.hpp"
#include "ors/envs/layers.hpp"
#include "ors/exact/occupancy.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/gcrl/evaluate.hpp"
#include "ors/gcrl/expectile.hpp"
#include "ors/gcrl/gaussian_policy.hpp"
#include "ors/gcrl/gciql.hpp"
#include "ors/gcrl/goal_sampler.hpp"
#include "ors/gcrl/q_iteration.hpp"
#include "ors/gcrl/tabular_gciql.hpp"
#include "support/oracles.hpp"

using namespace ors;
using namespace ors::gcrl;

TEST(Expectile, HalfIsHalfSquaredError) {
  for (double u : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    EXPECT_DOUBLE_EQ(expectile_loss(u, 0.5), 0.5 * u * u);
    EXPECT_DOUBLE_EQ(expectile_grad(u, 0.5), u);
  }
}

TEST(Expectile, AsymmetricWeightsAndDerivative) {
  EXPECT_DOUBLE_EQ(expectile_loss(2.0, 0.9), 0.9 * 4.0);
  EXPECT_DOUBLE_EQ(expectile_loss(-2.0, 0.9), 0.1 * 4.0);
  for (double u : {-1.5, -0.2, 0.4, 2.5}) {
    const double fd = (expectile_loss(u + 1e-6, 0.7) - expectile_loss(u - 1e-6, 0.7)) / 2e-6;
    EXPECT_NEAR(expectile_grad(u, 0.7), fd, 1e-6);
  }
  EXPECT_THROW(expectile_loss(1.0, 1.0), std::invalid_argument);
  const std::vector<double> r{1.0, -1.0};
  EXPECT_DOUBLE_EQ(expectile_loss_mean(r, 0.5), 0.5);
}

TEST(GoalSampler, MixtureFractionsAndStrictlyLaterTrajectoryGoals) {
  const std::vector<std::size_t> offsets{0, 50, 120, 200};
  std::vector<std::size_t> batch;
  Rng pick(1);
  for (int i = 0; i < 30000; ++i) batch.push_back(static_cast<std::size_t>(pick.uniform_int(200)));
  GoalSampler sampler{0.2, 0.5, 0.3, true, 0.9};
  Rng rng(2);
  const auto goals = sample_goals(offsets, batch, sampler, rng);
  double cur = 0, traj = 0, rnd = 0;
  for (std::size_t j = 0; j < goals.size(); ++j) {
    const auto& g = goals[j];
    const std::size_t i = batch[j];
    switch (g.source) {
      case GoalSource::current:
        ++cur;
        EXPECT_EQ(g.tuple, i);
        EXPECT_FALSE(g.next);
        break;
      case GoalSource::trajectory: {
        ++traj;
        EXPECT_TRUE(g.next);  // s_next of tuple >= i is strictly later than s_i
        EXPECT_GE(g.tuple, i);
        const std::size_t end = *std::upper_bound(offsets.begin(), offsets.end(), i);
        EXPECT_LT(g.tuple, end);
        break;
      }
      case GoalSource::random:
        ++rnd;
        EXPECT_LT(g.tuple, 200u);
        break;
    }
  }
  const double n = static_cast<double>(goals.size());
  EXPECT_NEAR(cur / n, 0.2, 0.015);
  EXPECT_NEAR(traj / n, 0.5, 0.015);
  EXPECT_NEAR(rnd / n, 0.3, 0.015);
}

TEST(GoalSampler, RejectsBadMixtures) {
  Rng rng(3);
  const std::vector<std::size_t> offsets{0, 10};
  EXPECT_THROW(sample_goals(offsets, {0}, GoalSampler{0.5, 0.5, 0.5, true, 0.9}, rng), std::invalid_argument);
  EXPECT_THROW(sample_goals(offsets, {0}, GoalSampler{-0.1, 0.6, 0.5, true, 0.9}, rng), std::invalid_argument);
  EXPECT_THROW(sample_goals(offsets, {10}, GoalSampler{}, rng), std::out_of_range);
  EXPECT_THROW(sample_goals({0}, {0}, GoalSampler{}, rng), std::invalid_argument);
}

TEST(QIteration, ZeroRewardGivesZeroValues) {
  const auto mdp = envs::GridMaze::open(3, 3).to_mdp(0.9);
  const auto res = tabular_q_iteration(mdp, Eigen::VectorXd::Zero(mdp.num_pairs()), 0.9);
  EXPECT_EQ(res.q.cwiseAbs().maxCoeff(), 0.0);
  for (const auto& set : res.argmax_sets) EXPECT_EQ(set.size(), 5u);
}

TEST(QIteration, SparseChainValuesHaveClosedForm) {
  const int n = 8, goal = 0;
  const auto mdp = envs::GridMaze::chain(n).to_mdp(0.95).with_absorbing_goal(goal);
  const auto res = tabular_q_iteration(mdp, exact::sparse_reward_table(mdp, {goal}), goal, 0.95);
  for (int s = 0; s < n; ++s) EXPECT_NEAR(res.v(s), -(1.0 - std::pow(0.95, s)) / 0.05, 1e-8);
  for (int s = 1; s < n; ++s) EXPECT_EQ(res.argmax_sets[static_cast<std::size_t>(s)], std::vector<int>{envs::kLeft});
}

TEST(QIteration, ShapedGreedyPolicyIsShortestPathAcrossDiscounts) {
  const auto maze = envs::GridMaze::chain(9);
  for (double gamma : {0.5, 0.9, 0.99, 0.999}) {
    const int goal = 4;
    const auto mdp = maze.to_mdp(gamma).with_absorbing_goal(goal);
    const auto layers = envs::compute_layers(mdp, goal);
    const auto occ = exact::solve_occupancy(mdp, envs::layer_monotone_policy(mdp, layers), gamma);
    const auto m = exact::wasserstein_to_goal(occ, mdp, goal);
    const auto res = tabular_q_iteration(mdp, exact::shaped_reward_exact(m, 1.0), goal, gamma);
    for (int s = 0; s < 9; ++s)
      if (s != goal) EXPECT_EQ(res.argmax_sets[static_cast<std::size_t>(s)], layers.shortest_actions(mdp, s)) << gamma;
  }
}

TEST(QIteration, RejectsBadInputs) {
  const auto mdp = envs::GridMaze::chain(3).to_mdp(0.9);
  EXPECT_THROW(tabular_q_iteration(mdp, Eigen::VectorXd::Zero(3), 0.9), ShapeError);
  EXPECT_THROW(tabular_q_iteration(mdp, Eigen::VectorXd::Zero(15), 1.0), std::invalid_argument);
  QIterationOptions tight;
  tight.max_iterations = 2;
  EXPECT_THROW(tabular_q_iteration(mdp, Eigen::VectorXd::Constant(15, -1.0), 0.99, tight), ConvergenceError);
}

TEST(Evaluate, ShortestPathOracleAlwaysSucceeds) {
  const auto mdp = envs::GridMaze::maze8x8().to_mdp(0.99);
  std::vector<envs::LayerDecomposition> layers;
  std::vector<int> goals;
  for (int g = 0; g < mdp.num_states(); g += 5) {
    goals.push_back(g);
    layers.push_back(envs::compute_layers(mdp, g));
  }
  auto oracle = [&](int s, int g) {
    const auto& L = layers[static_cast<std::size_t>(g / 5)];
    return s == g ? static_cast<int>(envs::kStay) : L.shortest_actions(mdp, s).front();
  };
  const auto res = evaluate_policy(mdp, oracle, goals, 5, 100, Rng(4));
  EXPECT_DOUBLE_EQ(res.success_rate, 1.0);
  EXPECT_LT(res.mean_return, 0.0);
  const auto none = evaluate_policy(mdp, oracle, goals, 5, 0, Rng(4));
  EXPECT_DOUBLE_EQ(none.success_rate, 0.0);
  auto stay = [](int, int) { return static_cast<int>(envs::kStay); };
  EXPECT_DOUBLE_EQ(evaluate_policy(mdp, stay, goals, 5, 50, Rng(4)).success_rate, 0.0);
  EXPECT_THROW(evaluate_policy(mdp, stay, {}, 5, 50, Rng(4)), std::invalid_argument);
}

TEST(TabularGciql, SparseRewardLearnsToReachGoalsOnChain) {
  const auto mdp = envs::GridMaze::chain(5).to_mdp(0.9);
  const auto data = envs::generate_dataset(mdp, envs::PolicySpec{}, 30, 40, Rng(5));
  GciqlConfig cfg;
  cfg.gamma = 0.9;
  cfg.steps = 4000;
  cfg.batch_size = 64;
  cfg.critic_sampler.gamma = 0.9;
  cfg.actor_sampler.gamma = 0.9;
  std::vector<int> all{0, 1, 2, 3, 4};
  TabularGciql agent(mdp, data, cfg);
  Rng rng(6);
  agent.train(exact::sparse_reward_table(mdp, all), rng);
  const auto res = evaluate_policy(mdp, [&](int s, int g) { return agent.act(s, g); }, all, 4, 20, Rng(7));
  EXPECT_DOUBLE_EQ(res.success_rate, 1.0);
  EXPECT_THROW(agent.train(exact::sparse_reward_table(mdp, {0, 1}), rng), ShapeError);
}

TEST(TabularGciql, ZeroRewardKeepsValuesAtZero) {
  const auto mdp = envs::GridMaze::chain(4).to_mdp(0.9);
  const auto data = envs::generate_dataset(mdp, envs::PolicySpec{}, 5, 20, Rng(8));
  GciqlConfig cfg;
  cfg.steps = 200;
  cfg.batch_size = 16;
  TabularGciql agent(mdp, data, cfg);
  exact::RewardTable zero = exact::sparse_reward_table(mdp, {0, 1, 2, 3});
  zero.r.setZero();
  Rng rng(9);
  agent.train(zero, rng);
  for (int s = 0; s < 4; ++s)
    for (int g = 0; g < 4; ++g) {
      EXPECT_EQ(agent.value(s, g), 0.0);
      for (int a = 0; a < 5; ++a) EXPECT_EQ(agent.q_min(s, a, g), 0.0);
    }
}

namespace {

GciqlBatch random_gciql_batch(int sd, int ad, int n, Rng& rng) {
  GciqlBatch b;
  b.s = rng.normal_matrix(sd, n);
  b.a = (0.5 * rng.normal_matrix(ad, n)).array().tanh().matrix();
  b.s_next = rng.normal_matrix(sd, n);
  b.g = rng.normal_matrix(sd, n);
  b.reward = -Eigen::VectorXd::Ones(n);
  b.mask = Eigen::VectorXd::Ones(n);
  return b;
}

}  // namespace

TEST(Gciql, TargetQIsTheMinimumOfBothHeads) {
  GciqlConfig cfg;
  cfg.hidden = {8};
  Rng rng(10);
  const ExpectileCritic critic(2, 2, cfg, rng);
  const auto b = random_gciql_batch(2, 2, 20, rng);
  const Eigen::VectorXd t1 = critic.q(critic.q1_target.shadow, b.s, b.a, b.g);
  const Eigen::VectorXd t2 = critic.q(critic.q2_target.shadow, b.s, b.a, b.g);
  EXPECT_EQ(critic.target_q_min(b.s, b.a, b.g), t1.cwiseMin(t2));
  EXPECT_NE(t1, t2);
}

TEST(GaussianPolicy, HeadGradientsMatchFiniteDifferences) {
  Rng rng(11);
  GaussianPolicy pi(2, 3, {8}, false, rng);
  pi.log_std_min = -1.0;
  pi.log_std_max = 0.5;
  const auto out = pi.forward(rng.normal_matrix(2, 4), rng.normal_matrix(2, 4));
  const Eigen::MatrixXd a = rng.normal_matrix(3, 4) * 0.5;
  const Eigen::VectorXd w = rng.uniform_vector(4);
  const Eigen::MatrixXd dmean = rng.normal_matrix(3, 4);
  auto from_raw = [&](const Eigen::VectorXd& flat) {
    GaussianPolicy::Output o;
    o.raw = Eigen::Map<const Eigen::MatrixXd>(flat.data(), 6, 4);
    o.mean = o.raw.topRows(3).array().tanh().matrix();
    o.log_std = o.raw.bottomRows(3).cwiseMax(pi.log_std_min).cwiseMin(pi.log_std_max);
    return o;
  };
  const Eigen::VectorXd raw = Eigen::Map<const Eigen::VectorXd>(out.raw.data(), out.raw.size());
  const Eigen::MatrixXd an = pi.log_prob_raw_grad(out, a, w);
  const Eigen::VectorXd fd =
      ors::testing::central_difference([&](const Eigen::VectorXd& r) { return pi.log_prob(from_raw(r), a).dot(w); }, raw,
                                  1e-6);
  EXPECT_LT(ors::testing::max_relative_error(Eigen::Map<const Eigen::VectorXd>(an.data(), an.size()), fd), 1e-5);
  const Eigen::MatrixXd am = pi.mean_raw_grad(out, dmean);
  const Eigen::VectorXd fdm = ors::testing::central_difference(
      [&](const Eigen::VectorXd& r) { return (from_raw(r).mean.array() * dmean.array()).sum(); }, raw, 1e-6);
  EXPECT_LT(ors::testing::max_relative_error(Eigen::Map<const Eigen::VectorXd>(am.data(), am.size()), fdm), 1e-5);
}

TEST(Gciql, FirstActorStepDescendsTheActorLoss) {
  // Adam's first step is -lr * g / (|g| + eps), so its sign gives the sign of the gradient.
  GciqlConfig cfg;
  cfg.hidden = {8};
  cfg.layer_norm = true;
  Rng rng(12);
  ExpectileCritic critic(2, 2, cfg, rng);
  GaussianPolicy pi(2, 2, cfg.hidden, true, rng, 1e-3);
  const auto b = random_gciql_batch(2, 2, 16, rng);
  const Eigen::VectorXd before = pi.net.params();
  gciql_step(critic, pi, b, cfg);
  const Eigen::VectorXd step = pi.net.params() - before;

  GaussianPolicy probe = pi;
  probe.net.params() = before;
  const auto out0 = probe.forward(b.s, b.g);
  const Eigen::MatrixXd in0 = critic_inputs(b.s, out0.mean, b.g);
  const double lambda =
      critic.q1.forward_batch(in0).row(0).cwiseMin(critic.q2.forward_batch(in0).row(0)).cwiseAbs().mean();
  auto actor_loss = [&](const Eigen::VectorXd& p) {
    probe.net.params() = p;
    const auto out = probe.forward(b.s, b.g);
    const Eigen::MatrixXd in = critic_inputs(b.s, out.mean, b.g);
    const Eigen::VectorXd q =
        critic.q1.forward_batch(in).row(0).cwiseMin(critic.q2.forward_batch(in).row(0)).transpose();
    return -(cfg.q_weight * q.mean() / lambda + cfg.alpha * probe.log_prob(out, b.a).mean());
  };
  const Eigen::VectorXd fd = ors::testing::central_difference(actor_loss, before, 1e-6);
  int compared = 0;
  for (Eigen::Index i = 0; i < fd.size(); ++i) {
    if (std::abs(fd(i)) < 1e-5) continue;
    ++compared;
    EXPECT_NEAR(step(i), -1e-3 * (fd(i) > 0 ? 1.0 : -1.0), 1e-6) << "param " << i;
  }
  EXPECT_GT(compared, 16);
}

TEST(Gciql, ZeroQWeightReducesToBehaviourCloning) {
  GciqlConfig cfg;
  cfg.hidden = {16};
  cfg.q_weight = 0.0;
  cfg.alpha = 1.0;
  Rng rng(13);
  ExpectileCritic critic(2, 2, cfg, rng);
  GaussianPolicy pi(2, 2, cfg.hidden, true, rng, 1e-2);
  auto b = random_gciql_batch(2, 2, 32, rng);
  b.a.row(0).setConstant(0.3);
  b.a.row(1).setConstant(-0.6);
  for (int k = 0; k < 600; ++k) gciql_step(critic, pi, b, cfg);
  const auto out = pi.forward(b.s, b.g);
  EXPECT_LT((out.mean.row(0).array() - 0.3).abs().maxCoeff(), 0.05);
  EXPECT_LT((out.mean.row(1).array() + 0.6).abs().maxCoeff(), 0.05);
}

TEST(Gciql, NonFiniteRewardNamesTheBatchIndex) {
  GciqlConfig cfg;
  cfg.hidden = {4};
  Rng rng(14);
  ExpectileCritic critic(1, 1, cfg, rng);
  GaussianPolicy pi(1, 1, cfg.hidden, false, rng);
  auto b = random_gciql_batch(1, 1, 5, rng);
  b.reward(3) = std::nan("");
  try {
    gciql_step(critic, pi, b, cfg);
    FAIL() << "NaN reward accepted";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("index 3"), std::string::npos) << e.what();
  }
}
