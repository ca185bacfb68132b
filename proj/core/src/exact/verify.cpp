#include "ors/exact/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ors/envs/layers.hpp"
#include "ors/exact/occupancy.hpp"
#include "ors/gcrl/q_iteration.hpp"

namespace ors::exact {

nlohmann::json Violation::to_json() const { return {{"kind", kind}, {"where", where}, {"magnitude", magnitude}}; }

void VerificationReport::record(Violation v) {
  ++violation_count;
  max_violation_magnitude = std::max(max_violation_magnitude, v.magnitude);
  if (violations.size() < kMaxListed) violations.push_back(std::move(v));
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& v : violations) list.push_back(v.to_json());
  return {{"assumption_report", assumptions.to_json()},
          {"preconditions_met", preconditions_met},
          {"gamma", gamma},
          {"violations", list},
          {"violation_count", violation_count},
          {"max_violation_magnitude", max_violation_magnitude},
          {"instances_checked", instances_checked}};
}

nlohmann::json Theorem1Report::to_json() const {
  auto j = VerificationReport::to_json();
  j["states_matching"] = states_matching;
  j["states_compared"] = states_compared;
  j["q_residual"] = q_residual;
  j["q_iterations"] = q_iterations;
  j["worst_gap_slack"] = worst_gap_slack;
  j["gap_violations"] = gap_violations;
  return j;
}

VerificationReport verify_prop1(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy, int goal,
                                double tol) {
  VerificationReport report;
  report.gamma = mdp.gamma();
  const auto absorbing = mdp.with_absorbing_goal(goal);
  report.assumptions = envs::check_assumptions(absorbing, policy, goal);
  report.preconditions_met = report.assumptions.all_hold();
  if (!report.preconditions_met) return report;

  const auto occ = solve_occupancy(absorbing, policy, absorbing.gamma());
  const auto m = wasserstein_to_goal(occ, absorbing, goal);
  const auto layers = envs::compute_layers(absorbing, goal);

  // (i) every state of S_{k-1} has M no larger than every state of S_k.
  for (int k = 1; k < layers.num_layers(); ++k)
    for (int inner : layers.layers[static_cast<std::size_t>(k - 1)])
      for (int outer : layers.layers[static_cast<std::size_t>(k)]) {
        ++report.instances_checked;
        const double excess = m.state(inner, 0) - m.state(outer, 0);
        if (excess > tol) report.record({"layer_monotonicity", {inner, outer, k}, excess});
      }

  // (ii) shortest-path actions beat every action that does not shorten the path.
  for (int s = 0; s < absorbing.num_states(); ++s) {
    const auto shortest = layers.shortest_actions(absorbing, s);
    for (int best : shortest)
      for (int a = 0; a < absorbing.num_actions(); ++a) {
        if (std::find(shortest.begin(), shortest.end(), a) != shortest.end()) continue;
        ++report.instances_checked;
        const double excess = m.pair(s * absorbing.num_actions() + best, 0) - m.pair(s * absorbing.num_actions() + a, 0);
        if (excess > tol) report.record({"optimal_action", {s, best, a}, excess});
      }
  }
  return report;
}

Theorem1Report verify_theorem1(const envs::DeterministicMdp& absorbing, const WassersteinTable& m, int goal,
                               double gamma, const envs::AssumptionReport& assumptions, double tol) {
  Theorem1Report report;
  report.gamma = gamma;
  report.assumptions = assumptions;
  report.preconditions_met = assumptions.all_hold();
  if (!report.preconditions_met) return report;

  const auto reward = shaped_reward_exact(m, 1.0);
  gcrl::QIterationOptions options;
  options.tol = 1e-10;
  const auto q = gcrl::tabular_q_iteration(absorbing, reward, goal, gamma, options);
  report.q_residual = q.residual;
  report.q_iterations = q.iterations;

  const auto layers = envs::compute_layers(absorbing, goal);
  for (int s = 0; s < absorbing.num_states(); ++s) {
    if (s == goal || !layers.reachable(s)) continue;
    const auto shortest = layers.shortest_actions(absorbing, s);
    const auto& greedy = q.argmax_sets[static_cast<std::size_t>(s)];
    ++report.states_compared;
    ++report.instances_checked;
    const bool inside = std::all_of(greedy.begin(), greedy.end(), [&](int a) {
      return std::find(shortest.begin(), shortest.end(), a) != shortest.end();
    });
    if (inside) {
      ++report.states_matching;
      continue;
    }
    double best_shortest = -std::numeric_limits<double>::infinity();
    for (int a : shortest) best_shortest = std::max(best_shortest, q.q(s, a));
    std::vector<int> where{s};
    where.insert(where.end(), greedy.begin(), greedy.end());
    report.record({"greedy_not_shortest", where, q.v(s) - best_shortest});
  }

  // value gap between adjacent layers
  const double delta_phi = assumptions.delta_phi;
  report.worst_gap_slack = std::numeric_limits<double>::infinity();
  for (int k = 1; k < layers.num_layers(); ++k) {
    double inner_min = std::numeric_limits<double>::infinity();
    double outer_max = -std::numeric_limits<double>::infinity();
    int inner_state = -1, outer_state = -1;
    for (int s : layers.layers[static_cast<std::size_t>(k - 1)])
      if (q.v(s) < inner_min) inner_min = q.v(s), inner_state = s;
    for (int s : layers.layers[static_cast<std::size_t>(k)])
      if (q.v(s) > outer_max) outer_max = q.v(s), outer_state = s;
    const double bound = (1.0 - std::pow(gamma, k - 1)) * delta_phi;
    const double slack = inner_min - outer_max - bound;
    ++report.instances_checked;
    report.worst_gap_slack = std::min(report.worst_gap_slack, slack);
    if (slack < -tol) {
      ++report.gap_violations;
      report.record({"lemma_gap", {inner_state, outer_state, k}, -slack});
    }
  }
  if (!std::isfinite(report.worst_gap_slack)) report.worst_gap_slack = 0.0;
  return report;
}

Theorem1Report verify_theorem1(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy, int goal,
                               double tol) {
  const auto absorbing = mdp.with_absorbing_goal(goal);
  const auto assumptions = envs::check_assumptions(absorbing, policy, goal);
  if (!assumptions.all_hold()) {
    Theorem1Report report;
    report.gamma = mdp.gamma();
    report.assumptions = assumptions;
    return report;
  }
  const auto occ = solve_occupancy(absorbing, policy, absorbing.gamma());
  const auto m = wasserstein_to_goal(occ, absorbing, goal);
  return verify_theorem1(absorbing, m, goal, absorbing.gamma(), assumptions, tol);
}

}  // namespace ors::exact
