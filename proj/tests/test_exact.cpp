#include <gtest/gtest.h>

#include "ors/envs/grid_maze.hpp"
#include "ors/envs/layers.hpp"
#include "ors/exact/occupancy.hpp"
#include "ors/exact/verify.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/gcrl/q_iteration.hpp"
#include "support/oracles.hpp"

using namespace ors;
using envs::DeterministicMdp;
using envs::GridMaze;

namespace {

// 3 states on a cycle; action 0 advances, action 1 stays.
DeterministicMdp three_cycle() {
  Eigen::MatrixXd coords(1, 3);
  coords << 0, 1, 2;
  return DeterministicMdp(3, 2, {1, 0, 2, 1, 0, 2}, coords, 0.9);
}

envs::PolicyTable monotone_policy(const DeterministicMdp& mdp, int goal) {
  const auto absorbing = mdp.with_absorbing_goal(goal);
  return envs::layer_monotone_policy(absorbing, envs::compute_layers(absorbing, goal));
}

}  // namespace

TEST(Occupancy, AbsorbingStateIsADelta) {
  const DeterministicMdp mdp(1, 1, {0}, Eigen::MatrixXd::Zero(1, 1), 0.9);
  const auto occ = exact::solve_occupancy(mdp, envs::uniform_policy(mdp), 0.9);
  EXPECT_NEAR(occ.d(0, 0), 1.0, 1e-14);
}

TEST(Occupancy, TwoStateSwapHasClosedForm) {
  Eigen::MatrixXd coords(1, 2);
  coords << 0, 1;
  const DeterministicMdp mdp(2, 1, {1, 0}, coords, 0.9);
  for (double gamma : {0.05, 0.5, 0.9, 0.99}) {
    const auto occ = exact::solve_occupancy(mdp, envs::uniform_policy(mdp), gamma);
    // first future state is the other one: P(s+ = 1 | 0) = 1 / (1 + gamma)
    EXPECT_NEAR(occ.row(0, 0)(1), 1.0 / (1.0 + gamma), 1e-12);
    EXPECT_NEAR(occ.row(0, 0)(0), gamma / (1.0 + gamma), 1e-12);
  }
}

TEST(Occupancy, DirectAndIterativeAgreeAndRowsAreDistributions) {
  const auto mdp = GridMaze::maze8x8().to_mdp(0.99);
  const auto pi = envs::uniform_policy(mdp);
  const auto direct = exact::solve_occupancy(mdp, pi, 0.95, exact::SolveMethod::direct);
  const auto iter = exact::solve_occupancy(mdp, pi, 0.95, exact::SolveMethod::iterative);
  EXPECT_LT((direct.d - iter.d).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(exact::bellman_residual(mdp, direct), 1e-10);
  EXPECT_GE(direct.d.minCoeff(), -1e-14);
  EXPECT_LT((direct.d.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
}

TEST(Occupancy, MatchesMonteCarloOnThreeCycle) {
  const auto mdp = three_cycle();
  const auto pi = envs::uniform_policy(mdp);
  const auto occ = exact::solve_occupancy(mdp, pi, 0.9);
  Rng rng(21);
  for (auto [s, a] : {std::pair{0, 0}, std::pair{1, 1}}) {
    const Eigen::VectorXd mc = ors::testing::monte_carlo_occupancy(mdp, pi, s, a, 0.9, 1'000'000, rng);
    // 1e6 samples: standard error below 5e-4 per entry
    EXPECT_LT((mc - occ.row(s, a).transpose()).cwiseAbs().maxCoeff(), 3e-3);
  }
}

TEST(Wasserstein, DirectSumMatchesRecursionOnWalledMaze) {
  const auto mdp = GridMaze::parse(
                       ".....\n"
                       ".###.\n"
                       "...#.\n"
                       ".#...\n"
                       ".....\n")
                       .to_mdp(0.95);
  const auto pi = envs::uniform_policy(mdp);
  const auto occ = exact::solve_occupancy(mdp, pi, 0.95);
  for (int g : {0, 7, mdp.num_states() - 1}) {
    const auto m = exact::wasserstein_to_goal(occ, mdp, g);
    const Eigen::VectorXd rec = exact::wasserstein_recursion(mdp, pi, 0.95, g);
    const double scale = exact::potential_column(mdp, g).maxCoeff();
    EXPECT_LT((m.pair.col(0) - rec).cwiseAbs().maxCoeff(), 1e-9 * scale);
    EXPECT_LT(exact::wasserstein_recursion_residual(mdp, pi, 0.95, g, rec), 1e-9 * scale);
    EXPECT_GE(m.pair.minCoeff(), 0.0);
  }
}

TEST(Wasserstein, AbsorbingGoalNeighbourHasZeroCost) {
  const auto mdp = GridMaze::chain(5).to_mdp(0.99).with_absorbing_goal(4);
  const auto occ = exact::solve_occupancy(mdp, monotone_policy(mdp, 4), 0.99);
  const auto m = exact::wasserstein_all_goals(occ, mdp);
  EXPECT_NEAR(m.at(3, envs::kRight, 4), 0.0, 1e-12);
  EXPECT_GT(m.at(3, envs::kLeft, 4), 0.0);
  EXPECT_NEAR(m.at_state(4, 4), 0.0, 1e-12);
}

TEST(Rewards, ScaleDoesNotChangeArgmaxSets) {
  const auto maze = GridMaze::open(4, 4);
  const auto mdp = maze.to_mdp(0.99);
  const int goal = maze.state_of(1, 1);
  const auto absorbing = mdp.with_absorbing_goal(goal);
  const auto occ = exact::solve_occupancy(absorbing, monotone_policy(mdp, goal), 0.99);
  const auto m = exact::wasserstein_to_goal(occ, absorbing, goal);
  const auto base = gcrl::tabular_q_iteration(absorbing, exact::shaped_reward_exact(m, 1.0), goal, 0.99);
  for (double scale : {0.25, 7.0, 100.0}) {
    const auto r = exact::shaped_reward_exact(m, scale);
    EXPECT_NEAR(r.at(0, 0, goal), -m.at(0, 0, goal) / scale, 1e-15);
    const auto q = gcrl::tabular_q_iteration(absorbing, r, goal, 0.99);
    EXPECT_EQ(q.greedy, base.greedy) << scale;
  }
}

TEST(Rewards, SparseTableIsMinusOneAwayFromGoal) {
  const auto mdp = GridMaze::chain(4).to_mdp(0.9);
  const auto r = exact::sparse_reward_table(mdp, {2});
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < mdp.num_actions(); ++a) EXPECT_EQ(r.at(s, a, 2), s == 2 ? 0.0 : -1.0);
}

TEST(Prop1, HoldsOnChainAndOpenGridWithInteriorGoal) {
  for (int n : {3, 5, 11}) {
    const auto mdp = GridMaze::chain(n).to_mdp(0.99);
    for (int g : {0, n - 1, n / 2}) {
      const auto rep = exact::verify_prop1(mdp, monotone_policy(mdp, g), g);
      EXPECT_TRUE(rep.clean()) << rep.to_json().dump();
    }
  }
  const auto maze = GridMaze::open(4, 4);
  const auto mdp = maze.to_mdp(0.9);
  const int goal = maze.state_of(1, 1);
  EXPECT_TRUE(exact::verify_prop1(mdp, monotone_policy(mdp, goal), goal).clean());
}

TEST(Prop1, UMazeReportsUnmetPreconditions) {
  const auto maze = GridMaze::u_shape();
  const auto mdp = maze.to_mdp(0.99);
  const int goal = maze.state_of(2, 0);
  const auto rep = exact::verify_prop1(mdp, monotone_policy(mdp, goal), goal);
  EXPECT_FALSE(rep.preconditions_met);
  EXPECT_FALSE(rep.assumptions.a3.holds);
  EXPECT_FALSE(rep.clean());
}

TEST(Prop1, UniformPolicyBreaksA4) {
  const auto mdp = GridMaze::chain(5).to_mdp(0.99);
  const auto rep = exact::verify_prop1(mdp, envs::uniform_policy(mdp), 4);
  EXPECT_FALSE(rep.preconditions_met);
  EXPECT_FALSE(rep.assumptions.a4.holds);
}

TEST(Theorem1, GreedyActionsAreShortestPathActions) {
  const auto maze = GridMaze::open(4, 4);
  for (double gamma : {0.9, 0.99}) {
    const auto mdp = maze.to_mdp(gamma);
    const int goal = maze.state_of(1, 1);
    const auto rep = exact::verify_theorem1(mdp, monotone_policy(mdp, goal), goal);
    EXPECT_TRUE(rep.clean()) << rep.to_json().dump();
    EXPECT_EQ(rep.states_matching, rep.states_compared);
    EXPECT_EQ(rep.gap_violations, 0);
    EXPECT_GE(rep.worst_gap_slack, -1e-9);
    EXPECT_LT(rep.q_residual, 1e-9);
  }
  const auto chain = GridMaze::chain(7).to_mdp(0.99);
  const auto rep = exact::verify_theorem1(chain, monotone_policy(chain, 0), 0);
  EXPECT_TRUE(rep.clean());
  EXPECT_EQ(rep.states_compared, 6);
}
