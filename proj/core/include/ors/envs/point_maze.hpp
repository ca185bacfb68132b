#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"
#include "ors/envs/dataset.hpp"
#include "ors/envs/embedding.hpp"

namespace ors::envs {

struct WallSegment {
  Eigen::Vector2d from;
  Eigen::Vector2d to;
};

/// Point mass in the unit box. Actions live in [-1, 1]^2 and move the point by
/// step * a (plus optional Gaussian action noise). A move that would cross a
/// wall segment leaves the point where it was; moves past the box are clamped.
class PointMaze2d {
 public:
  explicit PointMaze2d(std::vector<WallSegment> walls, double step = 0.1, double goal_radius = 0.1,
                       double action_noise = 0.0);

  /// No interior walls.
  static PointMaze2d open();
  /// Vertical wall from (0.5, 0) to (0.5, 0.7): reaching the other half means going around the top.
  static PointMaze2d wall();
  static PointMaze2d from_name(const std::string& name);

  const std::vector<WallSegment>& walls() const noexcept { return walls_; }
  double step_size() const noexcept { return step_; }
  double goal_radius() const noexcept { return goal_radius_; }
  double action_noise() const noexcept { return action_noise_; }
  static constexpr int kStateDim = 2;
  static constexpr int kActionDim = 2;

  /// Noise is drawn from `rng` only when action_noise > 0.
  Eigen::Vector2d step(const Eigen::Vector2d& s, const Eigen::Vector2d& a, Rng& rng) const;
  bool reached(const Eigen::Vector2d& s, const Eigen::Vector2d& g) const { return (s - g).norm() <= goal_radius_; }
  bool crosses_wall(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const;
  Eigen::Vector2d sample_state(Rng& rng) const;

 private:
  std::vector<WallSegment> walls_;
  double step_;
  double goal_radius_;
  double action_noise_;
};

/// Closed segments [p1, p2] and [q1, q2] share a point.
bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                        const Eigen::Vector2d& q2);

/// uniform: actions uniform in [-1, 1]^2. epsilon-greedy: head straight for a
/// random goal (a fresh one once reached), with probability epsilon act
/// uniformly. layer-monotone is not defined for the continuous maze.
EmbeddedDataset generate_point_dataset(const PointMaze2d& env, const PolicySpec& spec, int n_trajectories,
                                       int horizon, const Rng& rng);

}  // namespace ors::envs
