#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ors/common/rng.hpp"
#include "ors/envs/layers.hpp"
#include "ors/envs/mdp.hpp"

namespace ors::analysis {

enum class RewardMode { sparse, ors, raw_rw };

std::string to_string(RewardMode mode);
RewardMode parse_reward_mode(const std::string& name);

/// States s_0 .. s_L with s_L the goal, and the action taken at each s_t (t < L).
struct ExpertTrajectory {
  std::vector<int> states;
  std::vector<int> actions;
  int goal = 0;
};

/// Follows the lowest-id shortest-path action from `start` until the goal.
ExpertTrajectory shortest_path_trajectory(const envs::DeterministicMdp& mdp, const envs::LayerDecomposition& layers,
                                          int start);

using RewardFn = std::function<double(int s, int a, int g)>;

struct NoisyValueTrace {
  std::vector<double> values;  ///< V-hat(s_t), same length as the trajectory
  RewardMode mode = RewardMode::sparse;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Backward recursion V(s_L) = 0,
///   V(s_t) = r(s_t, a_t, g) + gamma (V(s_{t+1}) + eps_t V(s_{t+1})),  eps_t = sigma z_t.
/// sparse uses r = -1 for every s_t != g; ors uses reward_fn; raw_rw skips the
/// recursion and reports V(s_t) = r(s_t, a_t, g) (1 + eps_t). `z` holds one
/// standard normal per state (index t), so different modes and sigmas can
/// share the same draws.
NoisyValueTrace noisy_value_trace(const ExpertTrajectory& trajectory, const RewardFn& reward_fn, RewardMode mode,
                                  double gamma, double sigma, const std::vector<double>& z);
/// Convenience form drawing z from rng.
NoisyValueTrace noisy_value_trace(const ExpertTrajectory& trajectory, const RewardFn& reward_fn, RewardMode mode,
                                  double gamma, double sigma, Rng& rng);

/// Fraction of t with V(s_{t+1}) < V(s_t). Rejects traces shorter than 2.
double delta_v(const NoisyValueTrace& trace);
double delta_v(const std::vector<double>& values);

struct SweepRow {
  RewardMode mode = RewardMode::sparse;
  double sigma = 0.0;
  double mean_delta_v = 0.0;
  double se = 0.0;  ///< standard error across seeds
};

/// For every (mode, sigma): per seed, delta_V averaged over trajectories with
/// equal weight, then mean and standard error across seeds. Seed k draws its
/// normals from Rng(base_seed).split(k).split(trajectory index); the same
/// draws are reused for every mode and sigma.
std::vector<SweepRow> sweep_sigma(const std::vector<ExpertTrajectory>& trajectories, const RewardFn& reward_fn,
                                  const std::vector<RewardMode>& modes, const std::vector<double>& sigmas,
                                  int seeds, double gamma, std::uint64_t base_seed = 0);

/// CSV with header mode,sigma,mean_delta_v,se.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace ors::analysis
