#pragma once

#include <vector>

#include "ors/common/rng.hpp"
#include "ors/envs/grid_maze.hpp"

namespace ors::envs {

struct MazeFamilyConfig {
  int num_mazes = 20;
  int goals_per_maze = 3;
  int min_side = 3;
  int max_side = 5;
  double wall_probability = 0.25;
  int min_free = 6;
  int max_attempts = 100000;
};

struct MazeInstance {
  GridMaze maze;
  std::vector<int> goals;  ///< goals for which A1-A3 hold
};

/// Random connected mazes, each kept only if at least `goals_per_maze` goals
/// satisfy the structural assumptions. Deterministic in the rng seed.
/// Throws ConvergenceError if the attempt budget runs out.
std::vector<MazeInstance> generate_maze_family(const MazeFamilyConfig& config, const Rng& rng);

/// True when every free cell can reach every other free cell.
bool is_connected(const GridMaze& maze);

}  // namespace ors::envs
