#include "ors/analysis/field_dump.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "ors/common/stats.hpp"
#include "ors/envs/layers.hpp"

namespace ors::analysis {

FieldDump reward_field_dump(const envs::DeterministicMdp& mdp, const RewardFn& reward_fn, int goal,
                            const std::vector<int>& states) {
  mdp.validate_state(goal);
  std::vector<int> list = states;
  if (list.empty())
    for (int s = 0; s < mdp.num_states(); ++s) list.push_back(s);
  const auto layers = envs::compute_layers(mdp, goal);
  FieldDump dump;
  dump.goal = goal;
  std::vector<double> neg_reward, steps;
  for (int s : list) {
    mdp.validate_state(s);
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.num_actions(); ++a) best = std::max(best, reward_fn(s, a, goal));
    dump.records.push_back({mdp.embedding(s), best, s});
    if (layers.reachable(s) && s != goal) {
      neg_reward.push_back(-best);
      steps.push_back(layers.step(s));
    }
  }
  dump.spearman_vs_steps = spearman(neg_reward, steps);
  return dump;
}

void write_field_csv(const FieldDump& dump, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x,y,reward\n" << std::setprecision(17);
  for (const auto& r : dump.records) {
    const double x = r.coords.size() > 0 ? r.coords(0) : 0.0;
    const double y = r.coords.size() > 1 ? r.coords(1) : 0.0;
    out << x << ',' << y << ',' << r.reward << '\n';
  }
}

}  // namespace ors::analysis
