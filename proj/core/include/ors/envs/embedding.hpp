#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "ors/envs/dataset.hpp"
#include "ors/envs/mdp.hpp"

namespace ors::envs {

/// Dataset with real-valued states and actions, one tuple per column. Discrete
/// datasets are lifted with coordinate states and one-hot actions; the point
/// maze produces this form directly.
struct EmbeddedDataset {
  Eigen::MatrixXd s;
  Eigen::MatrixXd a;
  Eigen::MatrixXd s_next;
  Eigen::MatrixXd a_next;
  std::vector<int> traj_id;
  std::vector<int> t;
  std::vector<std::size_t> offsets{0};

  std::size_t size() const noexcept { return traj_id.size(); }
  bool empty() const noexcept { return traj_id.empty(); }
  int state_dim() const noexcept { return static_cast<int>(s.rows()); }
  int action_dim() const noexcept { return static_cast<int>(a.rows()); }
  int num_trajectories() const noexcept { return static_cast<int>(offsets.size()) - 1; }
  /// Index one past the last tuple of the trajectory holding tuple i.
  std::size_t trajectory_end_of(std::size_t i) const;
  /// State k >= 1 steps after s of tuple i; clamps to the final state of the trajectory.
  Eigen::VectorXd future_state(std::size_t i, long k) const;
};

Eigen::VectorXd one_hot(int index, int size);

EmbeddedDataset embed(const DeterministicMdp& mdp, const OfflineDataset& data);

/// JSON Lines with states and actions both written as arrays.
void write_jsonl(const EmbeddedDataset& data, const std::filesystem::path& path);
EmbeddedDataset read_embedded_jsonl(const std::filesystem::path& path);

}  // namespace ors::envs
