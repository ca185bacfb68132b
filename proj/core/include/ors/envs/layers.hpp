#pragma once

#include <vector>

#include "ors/envs/mdp.hpp"

namespace ors::envs {

inline constexpr int kUnreachable = -1;

/// Shortest-path layer structure toward a goal: step*(s, g) for every state
/// and the level sets S_k = {s : step*(s, g) = k}.
struct LayerDecomposition {
  int goal = 0;
  std::vector<int> steps;                ///< step*(s, g), or kUnreachable
  std::vector<std::vector<int>> layers;  ///< layers[k] = S_k, each sorted ascending

  int step(int s) const { return steps[static_cast<std::size_t>(s)]; }
  bool reachable(int s) const { return step(s) != kUnreachable; }
  int num_layers() const noexcept { return static_cast<int>(layers.size()); }
  /// Actions moving s one layer closer to the goal (empty at the goal and for unreachable states).
  std::vector<int> shortest_actions(const DeterministicMdp& mdp, int s) const;
};

/// Exact BFS over the reversed successor graph.
LayerDecomposition compute_layers(const DeterministicMdp& mdp, int goal);

/// Goal-specific policy that picks uniformly among shortest-path actions and
/// stays put at the goal. Unreachable states act uniformly.
PolicyTable layer_monotone_policy(const DeterministicMdp& mdp, const LayerDecomposition& layers);

}  // namespace ors::envs
