#include <benchmark/benchmark.h>

#include "ors/envs/dataset.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/envs/grid_maze.hpp"
#include "ors/envs/layers.hpp"
#include "ors/exact/occupancy.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/flow/training.hpp"
#include "ors/gcrl/q_iteration.hpp"
#include "ors/nn/mlp.hpp"
#include "ors/reward/w2_estimate.hpp"

using namespace ors;

static void BM_OccupancySolve(benchmark::State& state) {
  const auto maze = state.range(0) == 0 ? envs::GridMaze::maze8x8() : envs::GridMaze::chain(static_cast<int>(state.range(0)));
  const auto mdp = maze.to_mdp(0.99);
  const auto pi = envs::uniform_policy(mdp);
  for (auto _ : state) benchmark::DoNotOptimize(exact::solve_occupancy(mdp, pi, 0.99, exact::SolveMethod::direct));
  state.SetLabel(std::to_string(mdp.num_states()) + " states");
}
BENCHMARK(BM_OccupancySolve)->Arg(0)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_WassersteinAllGoals(benchmark::State& state) {
  const auto mdp = envs::GridMaze::maze8x8().to_mdp(0.99);
  const auto occ = exact::solve_occupancy(mdp, envs::uniform_policy(mdp), 0.99);
  for (auto _ : state) benchmark::DoNotOptimize(exact::wasserstein_all_goals(occ, mdp));
}
BENCHMARK(BM_WassersteinAllGoals)->Unit(benchmark::kMillisecond);

static void BM_MlpForwardBackward(benchmark::State& state) {
  Rng rng(1);
  const int width = static_cast<int>(state.range(0));
  const std::vector<int> widths{10, width, width, width, 2};
  const auto net = nn::Mlp::build(widths, true, rng);
  const Eigen::MatrixXd x = rng.normal_matrix(10, 256);
  const Eigen::MatrixXd dy = rng.normal_matrix(2, 256);
  for (auto _ : state) {
    nn::ForwardCache cache;
    benchmark::DoNotOptimize(net.forward_batch(x, &cache));
    benchmark::DoNotOptimize(net.backward(cache, dy));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_MlpForwardBackward)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_FlowLossStep(benchmark::State& state) {
  const auto mdp = envs::GridMaze::open(3, 3).to_mdp(0.99);
  const auto data = envs::embed(mdp, envs::generate_dataset(mdp, envs::PolicySpec{}, 20, 100, Rng(2)));
  Rng rng(3);
  flow::VelocityFieldNet net(data.state_dim(), data.action_dim(), {64, 64, 64}, true, rng);
  for (auto _ : state) {
    const auto batch = flow::make_batch(data, flow::draw_indices(data.size(), 64, rng));
    benchmark::DoNotOptimize(
        flow::flow_loss_step(net, batch, 0.99, static_cast<int>(state.range(0)), flow::FutureTargetMode::sampled_x1, rng));
  }
}
BENCHMARK(BM_FlowLossStep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_W2Estimate(benchmark::State& state) {
  Rng rng(4);
  const flow::VelocityFieldNet net(2, 5, {64, 64, 64}, true, rng);
  const Eigen::MatrixXd s = rng.normal_matrix(2, 45), a = rng.normal_matrix(5, 45), g = rng.normal_matrix(2, 45);
  for (auto _ : state) benchmark::DoNotOptimize(reward::estimate_w2_batch(net.online, s, a, g, 32, rng));
}
BENCHMARK(BM_W2Estimate)->Unit(benchmark::kMillisecond);

static void BM_QIteration(benchmark::State& state) {
  const auto base = envs::GridMaze::maze8x8().to_mdp(0.99);
  const int goal = 0;
  const auto mdp = base.with_absorbing_goal(goal);
  const auto layers = envs::compute_layers(mdp, goal);
  const auto occ = exact::solve_occupancy(mdp, envs::layer_monotone_policy(mdp, layers), 0.99);
  const auto reward = exact::shaped_reward_exact(exact::wasserstein_to_goal(occ, mdp, goal), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gcrl::tabular_q_iteration(mdp, reward, goal, 0.99));
}
BENCHMARK(BM_QIteration)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
