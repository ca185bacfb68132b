#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "ors/common/error.hpp"
#include "ors/envs/assumptions.hpp"
#include "ors/envs/dataset.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/envs/grid_maze.hpp"
#include "ors/envs/layers.hpp"
#include "ors/envs/maze_family.hpp"
#include "ors/envs/point_maze.hpp"
#include "support/oracles.hpp"

using namespace ors;
using namespace ors::envs;

TEST(GridMaze, ChainDynamicsAndLayers) {
  const auto mdp = GridMaze::chain(5).to_mdp(0.99);
  EXPECT_EQ(mdp.num_states(), 5);
  EXPECT_EQ(mdp.successor(0, kLeft), 0);  // bump into the edge
  EXPECT_EQ(mdp.successor(0, kRight), 1);
  EXPECT_EQ(mdp.successor(2, kUp), 2);
  EXPECT_EQ(mdp.successor(4, kStay), 4);
  const auto layers = compute_layers(mdp, 4);
  for (int s = 0; s < 5; ++s) EXPECT_EQ(layers.step(s), 4 - s);
  EXPECT_EQ(layers.num_layers(), 5);
  EXPECT_EQ(layers.shortest_actions(mdp, 1), std::vector<int>{kRight});
  EXPECT_TRUE(layers.shortest_actions(mdp, 4).empty());
}

TEST(GridMaze, BfsLayersMatchDijkstraOnWalledMaze) {
  const auto maze = GridMaze::parse(
      ".....\n"
      ".###.\n"
      "...#.\n"
      ".#...\n"
      ".....\n");
  const auto mdp = maze.to_mdp(0.9);
  for (int g = 0; g < mdp.num_states(); ++g) {
    const auto layers = compute_layers(mdp, g);
    const auto ref = ors::testing::dijkstra_to_goal(mdp, g);
    for (int s = 0; s < mdp.num_states(); ++s) EXPECT_EQ(layers.step(s), ref[static_cast<std::size_t>(s)]);
  }
  const int corner = maze.state_of(0, 0);
  const int target = maze.state_of(2, 2);
  EXPECT_EQ(compute_layers(mdp, target).step(corner), 4);
}

TEST(GridMaze, ParseErrorsCarryLineNumbers) {
  try {
    GridMaze::parse("...\n..\n");
    FAIL() << "ragged layout accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  try {
    GridMaze::parse("; comment\n...\n.x.\n");
    FAIL() << "bad character accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(GridMaze::parse("G.\n.G\n"), ParseError);
}

TEST(GridMaze, TextRoundTripAndGoalMarker) {
  const auto maze = GridMaze::parse("..#\n.G.\n");
  ASSERT_TRUE(maze.marked_goal().has_value());
  EXPECT_EQ(maze.cell_of(*maze.marked_goal()), std::make_pair(1, 1));
  EXPECT_EQ(GridMaze::parse(maze.to_text()).to_text(), maze.to_text());
  EXPECT_TRUE(is_connected(GridMaze::maze8x8()));
}

TEST(GridMaze, NamedLayouts) {
  EXPECT_EQ(grid_maze_from_name("chain:7").num_free(), 7);
  EXPECT_EQ(grid_maze_from_name("grid:3x4").num_free(), 12);
  EXPECT_EQ(grid_maze_from_name("u-maze").num_free(), 7);
  EXPECT_THROW(grid_maze_from_name("grid:3"), std::invalid_argument);
}

TEST(Dataset, TuplesChainWithinTrajectories) {
  const auto mdp = GridMaze::open(3, 3).to_mdp(0.99);
  const auto data = generate_dataset(mdp, PolicySpec{}, 12, 30, Rng(1));
  ASSERT_EQ(data.num_trajectories(), 12);
  ASSERT_EQ(data.size(), 12u * 30u);
  for (int i = 0; i < data.num_trajectories(); ++i) {
    for (std::size_t k = data.trajectory_begin(i); k < data.trajectory_end(i); ++k) {
      const auto& tr = data.tuples[k];
      EXPECT_EQ(tr.traj_id, i);
      EXPECT_EQ(tr.s_next, mdp.successor(tr.s, tr.a));
      if (k + 1 < data.trajectory_end(i)) {
        EXPECT_EQ(data.tuples[k + 1].s, tr.s_next);
        EXPECT_EQ(data.tuples[k + 1].a, tr.a_next);
        EXPECT_EQ(data.tuples[k + 1].t, tr.t + 1);
      }
    }
  }
}

TEST(Dataset, UniformDataCoversEveryState) {
  const auto mdp = GridMaze::open(3, 3).to_mdp(0.99);
  const auto data = generate_dataset(mdp, PolicySpec{}, 100, 200, Rng(2));
  for (int c : visit_counts(mdp, data)) EXPECT_GT(c, 0);
  const auto pi = empirical_policy(mdp, data);
  EXPECT_NO_THROW(validate_policy(mdp, pi));
  EXPECT_LT((pi.array() - 0.2).abs().maxCoeff(), 0.05);
}

TEST(Dataset, RejectsBadArguments) {
  const auto mdp = GridMaze::chain(3).to_mdp(0.9);
  EXPECT_THROW(generate_dataset(mdp, PolicySpec{}, 5, 0, Rng(1)), std::invalid_argument);
  EXPECT_THROW(generate_dataset(mdp, PolicySpec{}, -1, 5, Rng(1)), std::invalid_argument);
  EXPECT_THROW(PolicySpec::parse("greedy"), std::invalid_argument);
  EXPECT_TRUE(generate_dataset(mdp, PolicySpec{}, 0, 5, Rng(1)).empty());
}

TEST(Dataset, SameSeedSameData) {
  const auto mdp = GridMaze::maze8x8().to_mdp(0.99);
  PolicySpec spec = PolicySpec::parse("epsilon-greedy");
  const auto a = generate_dataset(mdp, spec, 20, 40, Rng(3));
  const auto b = generate_dataset(mdp, spec, 20, 40, Rng(3));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.tuples[i].s, b.tuples[i].s);
    EXPECT_EQ(a.tuples[i].a, b.tuples[i].a);
  }
}

TEST(Dataset, JsonlRoundTrip) {
  const auto mdp = GridMaze::maze8x8().to_mdp(0.99);
  const auto data = generate_dataset(mdp, PolicySpec{}, 4, 9, Rng(4));
  const auto path = std::filesystem::temp_directory_path() / "ors_envs_dataset.jsonl";
  write_jsonl(data, mdp, path);
  const auto back = read_jsonl(path, mdp);
  ASSERT_EQ(back.size(), data.size());
  EXPECT_EQ(back.offsets, data.offsets);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto &x = data.tuples[i], &y = back.tuples[i];
    EXPECT_EQ(std::tie(x.traj_id, x.t, x.s, x.a, x.s_next, x.a_next),
              std::tie(y.traj_id, y.t, y.s, y.a, y.s_next, y.a_next));
  }
  std::filesystem::remove(path);
}

TEST(Dataset, EmbeddingUsesCoordinatesAndOneHotActions) {
  const auto mdp = GridMaze::open(2, 3).to_mdp(0.9);
  const auto data = generate_dataset(mdp, PolicySpec{}, 2, 5, Rng(5));
  const auto emb = embed(mdp, data);
  ASSERT_EQ(emb.size(), data.size());
  EXPECT_EQ(emb.state_dim(), 2);
  EXPECT_EQ(emb.action_dim(), kNumGridActions);
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(Eigen::VectorXd(emb.s.col(static_cast<Eigen::Index>(i))), mdp.embedding(data.tuples[i].s));
    EXPECT_EQ(Eigen::VectorXd(emb.a.col(static_cast<Eigen::Index>(i))), one_hot(data.tuples[i].a, 5));
  }
  // futures clamp at the end of the trajectory
  EXPECT_EQ(emb.future_state(0, 100), mdp.embedding(data.tuples[4].s_next));
  EXPECT_EQ(emb.future_state(0, 1), mdp.embedding(data.tuples[0].s_next));
}

TEST(Assumptions, LayerMonotoneDataSatisfiesA4) {
  const auto mdp = GridMaze::chain(6).to_mdp(0.99).with_absorbing_goal(5);
  PolicySpec spec = PolicySpec::parse("layer-monotone");
  spec.goal = 5;
  const auto data = generate_dataset(mdp, spec, 20, 15, Rng(6));
  const auto rep = check_assumptions(mdp, data, 5);
  EXPECT_TRUE(rep.all_hold()) << rep.to_json().dump();
  EXPECT_GT(rep.delta_phi, 0.0);

  const auto uniform = generate_dataset(mdp, PolicySpec{}, 20, 15, Rng(6));
  EXPECT_FALSE(check_assumptions(mdp, uniform, 5).a4.holds);
}

TEST(Assumptions, UMazeBreaksA3) {
  const auto maze = GridMaze::u_shape();
  const auto mdp = maze.to_mdp(0.99);
  const int goal = maze.state_of(2, 0);
  const auto rep = check_structure(mdp, goal);
  EXPECT_TRUE(rep.a1.holds);
  EXPECT_TRUE(rep.a2.holds);
  EXPECT_FALSE(rep.a3.holds);
  EXPECT_LE(rep.delta_phi, 0.0);
  EXPECT_FALSE(rep.a3.counterexample.empty());
}

TEST(Assumptions, DisconnectedGoalBreaksA2) {
  const auto mdp = GridMaze::parse(".#.\n").to_mdp(0.9);
  EXPECT_FALSE(check_structure(mdp, 0).a2.holds);
}

TEST(Assumptions, LayerMonotonePolicyOnlyDescends) {
  const auto mdp = GridMaze::maze8x8().to_mdp(0.99);
  for (int g : {0, 13, 30}) {
    const auto absorbing = mdp.with_absorbing_goal(g);
    const auto layers = compute_layers(absorbing, g);
    const auto pi = layer_monotone_policy(absorbing, layers);
    EXPECT_NO_THROW(validate_policy(absorbing, pi));
    EXPECT_TRUE(check_assumptions(absorbing, pi, g).a4.holds);
    EXPECT_DOUBLE_EQ(pi(g, kStay), 1.0);
  }
}

TEST(MazeFamily, DeterministicConnectedAndStructurallyValid) {
  MazeFamilyConfig cfg;
  cfg.num_mazes = 6;
  const auto a = generate_maze_family(cfg, Rng(7));
  const auto b = generate_maze_family(cfg, Rng(7));
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].maze.to_text(), b[i].maze.to_text());
    EXPECT_EQ(a[i].goals, b[i].goals);
    EXPECT_TRUE(is_connected(a[i].maze));
    EXPECT_EQ(static_cast<int>(a[i].goals.size()), cfg.goals_per_maze);
    const auto mdp = a[i].maze.to_mdp(0.9);
    for (int g : a[i].goals) EXPECT_TRUE(check_structure(mdp.with_absorbing_goal(g), g).all_hold());
  }
}

TEST(PointMaze, WallBlocksCrossingMoves) {
  const auto env = PointMaze2d::wall();
  Rng rng(8);
  const Eigen::Vector2d below(0.45, 0.3), above(0.45, 0.8), right(1.0, 0.0);
  EXPECT_EQ(env.step(below, right, rng), below);
  EXPECT_TRUE(env.step(above, right, rng).isApprox(Eigen::Vector2d(0.55, 0.8)));
  EXPECT_TRUE(env.step(Eigen::Vector2d(0.98, 0.5), right, rng).isApprox(Eigen::Vector2d(1.0, 0.5)));
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST(PointMaze, DatasetStaysInTheBox) {
  const auto env = PointMaze2d::wall();
  const auto data = generate_point_dataset(env, PolicySpec{}, 5, 50, Rng(9));
  ASSERT_EQ(data.size(), 250u);
  EXPECT_GE(data.s_next.minCoeff(), 0.0);
  EXPECT_LE(data.s_next.maxCoeff(), 1.0);
  EXPECT_LE(data.a.cwiseAbs().maxCoeff(), 1.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    EXPECT_FALSE(env.crosses_wall(data.s.col(k), data.s_next.col(k)));
  }
}
