#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "ors/analysis/value_trace.hpp"
#include "ors/envs/mdp.hpp"

namespace ors::analysis {

struct FieldRecord {
  Eigen::VectorXd coords;
  double reward = 0.0;  ///< max_a r(s, a, g)
  int state = -1;
};

struct FieldDump {
  int goal = 0;
  std::vector<FieldRecord> records;
  /// Spearman correlation of -max_a r with step*(s, g) over reachable states other
  /// than the goal (layer-1 states and g itself both reach M = 0 under the best action).
  double spearman_vs_steps = 0.0;
};

/// One record per listed state (all states when `states` is empty).
FieldDump reward_field_dump(const envs::DeterministicMdp& mdp, const RewardFn& reward_fn, int goal,
                            const std::vector<int>& states = {});

/// CSV with header x,y,reward (first two coordinates; y = 0 for 1-D embeddings).
void write_field_csv(const FieldDump& dump, const std::filesystem::path& path);

}  // namespace ors::analysis
