#include "ors/gcrl/goal_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ors::gcrl {

void GoalSampler::validate() const {
  if (p_cur < 0.0 || p_traj < 0.0 || p_rand < 0.0) throw std::invalid_argument("goal mixture has a negative weight");
  if (std::abs(p_cur + p_traj + p_rand - 1.0) > 1e-12) throw std::invalid_argument("goal mixture must sum to 1");
  if (geometric && !(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("goal sampler gamma must lie in [0, 1)");
}

std::vector<GoalRef> sample_goals(const std::vector<std::size_t>& offsets, const std::vector<std::size_t>& batch,
                                  const GoalSampler& sampler, Rng& rng) {
  sampler.validate();
  if (offsets.size() < 2) throw std::invalid_argument("goal sampling needs a non-empty dataset");
  const std::size_t total = offsets.back();
  std::vector<GoalRef> out;
  out.reserve(batch.size());
  for (std::size_t i : batch) {
    if (i >= total) throw std::out_of_range("batch index outside the dataset");
    const double u = rng.uniform();
    GoalRef g;
    if (u < sampler.p_cur) {
      g = {i, false, GoalSource::current};
    } else if (u < sampler.p_cur + sampler.p_traj) {
      const std::size_t end = *std::upper_bound(offsets.begin(), offsets.end(), i);
      const std::size_t remaining = end - i;  // future states available: s_next of tuples i .. end - 1
      std::size_t k = 0;
      if (sampler.geometric)
        k = static_cast<std::size_t>(rng.geometric(1.0 - sampler.gamma));
      else
        k = 1 + static_cast<std::size_t>(rng.uniform_int(static_cast<int>(remaining)));
      g = {i + std::min(k, remaining) - 1, true, GoalSource::trajectory};
    } else {
      g = {static_cast<std::size_t>(rng.uniform_int(static_cast<int>(total))), false, GoalSource::random};
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace ors::gcrl
