#include "ors/envs/layers.hpp"

#include <algorithm>
#include <deque>

#include "ors/envs/grid_maze.hpp"

namespace ors::envs {

std::vector<int> LayerDecomposition::shortest_actions(const DeterministicMdp& mdp, int s) const {
  std::vector<int> out;
  const int k = step(s);
  if (k == kUnreachable || k == 0) return out;
  for (int a = 0; a < mdp.num_actions(); ++a)
    if (step(mdp.successor(s, a)) == k - 1) out.push_back(a);
  return out;
}

LayerDecomposition compute_layers(const DeterministicMdp& mdp, int goal) {
  mdp.validate_state(goal);
  const int n = mdp.num_states();
  std::vector<std::vector<int>> predecessors(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < mdp.num_actions(); ++a) {
      const int next = mdp.successor(s, a);
      if (next != s) predecessors[static_cast<std::size_t>(next)].push_back(s);
    }
  LayerDecomposition out;
  out.goal = goal;
  out.steps.assign(static_cast<std::size_t>(n), kUnreachable);
  out.steps[static_cast<std::size_t>(goal)] = 0;
  std::deque<int> frontier{goal};
  while (!frontier.empty()) {
    const int s = frontier.front();
    frontier.pop_front();
    for (int p : predecessors[static_cast<std::size_t>(s)]) {
      if (out.steps[static_cast<std::size_t>(p)] != kUnreachable) continue;
      out.steps[static_cast<std::size_t>(p)] = out.steps[static_cast<std::size_t>(s)] + 1;
      frontier.push_back(p);
    }
  }
  const int depth = *std::max_element(out.steps.begin(), out.steps.end());
  out.layers.assign(static_cast<std::size_t>(depth + 1), {});
  for (int s = 0; s < n; ++s)
    if (out.steps[static_cast<std::size_t>(s)] != kUnreachable)
      out.layers[static_cast<std::size_t>(out.steps[static_cast<std::size_t>(s)])].push_back(s);
  return out;
}

PolicyTable layer_monotone_policy(const DeterministicMdp& mdp, const LayerDecomposition& layers) {
  PolicyTable pi = PolicyTable::Zero(mdp.num_states(), mdp.num_actions());
  for (int s = 0; s < mdp.num_states(); ++s) {
    if (s == layers.goal) {
      // Prefer an explicit stay action; otherwise any action that keeps us at the goal.
      int stay = -1;
      if (mdp.num_actions() == kNumGridActions && mdp.successor(s, kStay) == s) stay = kStay;
      for (int a = 0; stay < 0 && a < mdp.num_actions(); ++a)
        if (mdp.successor(s, a) == s) stay = a;
      if (stay >= 0)
        pi(s, stay) = 1.0;
      else
        pi.row(s).setConstant(1.0 / mdp.num_actions());
      continue;
    }
    const auto best = layers.shortest_actions(mdp, s);
    if (best.empty()) {
      pi.row(s).setConstant(1.0 / mdp.num_actions());
      continue;
    }
    for (int a : best) pi(s, a) = 1.0 / static_cast<double>(best.size());
  }
  return pi;
}

}  // namespace ors::envs
