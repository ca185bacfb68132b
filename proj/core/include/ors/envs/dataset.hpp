#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ors/common/rng.hpp"
#include "ors/envs/mdp.hpp"

namespace ors::envs {

/// One (s, a, s', a') tuple of a discrete dataset. a_next is the behavioural
/// action drawn at s_next, so it equals `a` of the following tuple.
struct Transition {
  int traj_id = 0;
  int t = 0;
  int s = 0;
  int a = 0;
  int s_next = 0;
  int a_next = 0;
};

struct PolicySpec {
  enum class Kind { uniform_random, epsilon_greedy_random_goals, layer_monotone };
  Kind kind = Kind::uniform_random;
  double epsilon = 0.3;  ///< epsilon-greedy: probability of a uniformly random action
  int goal = -1;         ///< layer-monotone: the goal whose layers the policy descends

  std::string describe() const;
  static PolicySpec parse(const std::string& name);  ///< "uniform", "epsilon-greedy", "layer-monotone"
};

/// Trajectories stored back to back; trajectory i covers
/// tuples[offsets[i], offsets[i + 1]).
struct OfflineDataset {
  std::vector<Transition> tuples;
  std::vector<std::size_t> offsets{0};
  PolicySpec policy;

  int num_trajectories() const noexcept { return static_cast<int>(offsets.size()) - 1; }
  std::size_t size() const noexcept { return tuples.size(); }
  bool empty() const noexcept { return tuples.empty(); }
  std::size_t trajectory_begin(int traj) const { return offsets[static_cast<std::size_t>(traj)]; }
  std::size_t trajectory_end(int traj) const { return offsets[static_cast<std::size_t>(traj) + 1]; }
  /// Appends a trajectory given as parallel lists of H + 1 states and H + 1 actions.
  void append_trajectory(const std::vector<int>& states, const std::vector<int>& actions);
};

/// Rolls out `n_trajectories` episodes of `horizon` steps from uniformly random
/// start states. Trajectory i uses rng.split(i), so the result does not depend
/// on the thread count.
OfflineDataset generate_dataset(const DeterministicMdp& mdp, const PolicySpec& spec, int n_trajectories, int horizon,
                                const Rng& rng);

/// pi_D(a|s) estimated from action counts (a and the trailing a_next of every
/// trajectory). States never visited get the uniform row.
PolicyTable empirical_policy(const DeterministicMdp& mdp, const OfflineDataset& data);

/// Number of times each state appears along the stored trajectories.
std::vector<int> visit_counts(const DeterministicMdp& mdp, const OfflineDataset& data);

/// JSON Lines, one tuple per line: {traj_id, t, s, a, s_next, a_next} with
/// states written as coordinate arrays.
void write_jsonl(const OfflineDataset& data, const DeterministicMdp& mdp, const std::filesystem::path& path);
OfflineDataset read_jsonl(const std::filesystem::path& path, const DeterministicMdp& mdp);

}  // namespace ors::envs
