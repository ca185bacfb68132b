#include "ors/envs/maze_family.hpp"

#include <algorithm>
#include <set>

#include "ors/common/error.hpp"
#include "ors/envs/assumptions.hpp"
#include "ors/envs/layers.hpp"

namespace ors::envs {

bool is_connected(const GridMaze& maze) {
  if (maze.num_free() == 0) return false;
  const auto mdp = maze.to_mdp(0.9);
  const auto layers = compute_layers(mdp, 0);
  for (int s = 0; s < mdp.num_states(); ++s)
    if (!layers.reachable(s)) return false;
  return true;
}

std::vector<MazeInstance> generate_maze_family(const MazeFamilyConfig& config, const Rng& rng) {
  if (config.min_side < 1 || config.max_side < config.min_side)
    throw std::invalid_argument("maze side bounds are inconsistent");
  Rng local = rng.split("maze-family");
  std::vector<MazeInstance> out;
  std::set<std::string> seen;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    if (static_cast<int>(out.size()) >= config.num_mazes) return out;
    const int rows = config.min_side + local.uniform_int(config.max_side - config.min_side + 1);
    const int cols = config.min_side + local.uniform_int(config.max_side - config.min_side + 1);
    std::vector<bool> walls(static_cast<std::size_t>(rows * cols));
    for (std::size_t i = 0; i < walls.size(); ++i) walls[i] = local.bernoulli(config.wall_probability);
    if (std::count(walls.begin(), walls.end(), false) < config.min_free) continue;
    GridMaze maze(rows, cols, walls);
    if (!is_connected(maze)) continue;
    if (!seen.insert(maze.to_text()).second) continue;

    const auto mdp = maze.to_mdp(0.9);
    std::vector<int> goals;
    for (int g = 0; g < mdp.num_states(); ++g)
      if (check_structure(mdp, g).all_hold()) goals.push_back(g);
    if (static_cast<int>(goals.size()) < config.goals_per_maze) continue;
    // Spread the chosen goals over the candidates instead of taking the first few.
    std::vector<int> chosen;
    for (int i = 0; i < config.goals_per_maze; ++i)
      chosen.push_back(goals[static_cast<std::size_t>(i) * goals.size() / static_cast<std::size_t>(config.goals_per_maze)]);
    out.push_back({std::move(maze), std::move(chosen)});
  }
  if (static_cast<int>(out.size()) >= config.num_mazes) return out;
  throw ConvergenceError("maze family: only " + std::to_string(out.size()) + " mazes found", 0.0);
}

}  // namespace ors::envs
