#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ors::lab {

struct RunSection {
  std::int64_t seed = 0;
  std::string out = "runs/default";
  bool operator==(const RunSection&) const = default;
};

struct EnvSection {
  std::string maze = "chain:5";  ///< built-in name, layout file, or "family" (verify only)
  double gamma = 0.99;
  std::int64_t goal = -1;        ///< -1: the layout's G cell, else the last state
  bool operator==(const EnvSection&) const = default;
};

struct DatasetSection {
  std::string policy = "uniform";
  double epsilon = 0.3;
  std::int64_t n_trajectories = 100;
  std::int64_t horizon = 200;
  std::int64_t seed = 0;
  bool operator==(const DatasetSection&) const = default;
};

struct OccupancySection {
  std::vector<std::int64_t> hidden{64, 64, 64};
  bool layer_norm = true;
  std::int64_t pretrain_steps = 2000;
  std::int64_t flow_loss_steps = 2000;
  std::int64_t flow_steps_train = 16;
  std::int64_t flow_steps_sample = 16;
  std::int64_t batch = 64;
  double lr = 3e-4;
  double final_lr_ratio = 1.0;
  double target_rate = 0.005;
  std::string future_target_mode = "sampled_x1";
  bool operator==(const OccupancySection&) const = default;
};

struct RewardSection {
  std::vector<std::int64_t> hidden{64, 64};
  bool layer_norm = true;
  std::int64_t steps = 2000;
  std::int64_t batch = 64;
  std::int64_t mc_draws = 32;
  double lr = 3e-4;
  double scale = 1.0;
  double p_cur = 0.2;
  double p_traj = 0.5;
  double p_rand = 0.3;
  bool operator==(const RewardSection&) const = default;
};

struct GcrlSection {
  std::string reward = "ors";  ///< ors (distilled net), ors-exact, sparse
  double kappa = 0.6;
  double alpha = 0.3;
  std::int64_t steps = 20000;
  std::int64_t batch = 256;
  double table_lr = 0.1;
  double target_rate = 0.005;
  double critic_p_cur = 0.2;
  double critic_p_traj = 0.5;
  double critic_p_rand = 0.3;
  double actor_p_cur = 0.0;
  double actor_p_traj = 1.0;
  double actor_p_rand = 0.0;
  std::int64_t eval_episodes = 10;
  std::int64_t eval_horizon = 100;
  bool operator==(const GcrlSection&) const = default;
};

struct AnalysisSection {
  std::vector<double> sigmas{1e-4, 5e-4, 1e-3, 5e-3};
  std::int64_t seeds = 100;
  std::vector<std::string> modes{"sparse", "ors", "raw_rw"};
  bool operator==(const AnalysisSection&) const = default;
};

struct VerifySection {
  double tol = 1e-9;
  std::vector<std::int64_t> goals{};  ///< empty: every state
  std::int64_t family_mazes = 20;
  std::int64_t goals_per_maze = 3;
  std::vector<double> gammas{0.9, 0.99};
  std::int64_t prop2_draws = 32;
  bool operator==(const VerifySection&) const = default;
};

struct RunConfig {
  RunSection run;
  EnvSection env;
  DatasetSection dataset;
  OccupancySection occupancy;
  RewardSection reward;
  GcrlSection gcrl;
  AnalysisSection analysis;
  VerifySection verify;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the TOML subset used by run configs: [section] headers, key = value
/// lines with integers, floats, booleans, basic strings and one-line arrays,
/// and # comments. Missing keys keep their defaults; unknown sections or keys
/// raise ParseError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, in a stable order, formatted so that parse_config(to_toml(c)) == c.
std::string to_toml(const RunConfig& config);

/// Hex SHA-256 of to_toml(config).
std::string config_hash(const RunConfig& config);

}  // namespace ors::lab
