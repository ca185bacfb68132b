#pragma once

#include <cstddef>
#include <vector>

#include "ors/common/rng.hpp"

namespace ors::gcrl {

/// Hindsight goal mixture: the current state (p_cur), a later state of the
/// same trajectory (p_traj) or the state of a uniformly drawn tuple (p_rand).
struct GoalSampler {
  double p_cur = 0.2;
  double p_traj = 0.5;
  double p_rand = 0.3;
  bool geometric = true;  ///< future offset ~ Geom(1 - gamma) if true, else uniform over the rest of the trajectory
  double gamma = 0.99;

  /// Throws unless probabilities are non-negative and sum to 1 within 1e-12.
  void validate() const;
};

enum class GoalSource { current, trajectory, random };

/// A goal expressed as a dataset location: `s_next` of tuple `tuple` when
/// `next` is set, otherwise its `s`.
struct GoalRef {
  std::size_t tuple = 0;
  bool next = false;
  GoalSource source = GoalSource::current;
};

/// One goal per batch element. `offsets` are the trajectory boundaries
/// (tuples[offsets[k], offsets[k+1]) form trajectory k). A trajectory goal
/// k >= 1 steps ahead of tuple i is s_next of tuple i + k - 1, clamped to the
/// final tuple; because every tuple carries s_next the draw always lands
/// strictly later in time.
std::vector<GoalRef> sample_goals(const std::vector<std::size_t>& offsets, const std::vector<std::size_t>& batch,
                                  const GoalSampler& sampler, Rng& rng);

}  // namespace ors::gcrl
