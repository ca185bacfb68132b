#include "ors/envs/assumptions.hpp"

#include <limits>

namespace ors::envs {

namespace {

nlohmann::json check_json(const AssumptionCheck& c) {
  nlohmann::json j{{"holds", c.holds}};
  if (!c.holds) {
    j["detail"] = c.detail;
    j["counterexample"] = c.counterexample;
  }
  return j;
}

}  // namespace

nlohmann::json AssumptionReport::to_json() const {
  return {{"goal", goal},
          {"A1", check_json(a1)},
          {"A2", check_json(a2)},
          {"A3", check_json(a3)},
          {"A4", check_json(a4)},
          {"delta_phi", std::isfinite(delta_phi) ? nlohmann::json(delta_phi) : nlohmann::json(nullptr)},
          {"all_hold", all_hold()}};
}

double layer_potential_gap(const DeterministicMdp& mdp, const LayerDecomposition& layers,
                           std::pair<int, int>* worst_pair) {
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 1; k < layers.num_layers(); ++k) {
    int lo_state = -1, hi_state = -1;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int s : layers.layers[static_cast<std::size_t>(k)]) {
      const double phi = mdp.potential(s, layers.goal);
      if (phi < lo) lo = phi, lo_state = s;
    }
    for (int s : layers.layers[static_cast<std::size_t>(k - 1)]) {
      const double phi = mdp.potential(s, layers.goal);
      if (phi > hi) hi = phi, hi_state = s;
    }
    if (lo - hi < gap) {
      gap = lo - hi;
      if (worst_pair) *worst_pair = {hi_state, lo_state};
    }
  }
  return gap;
}

AssumptionReport check_structure(const DeterministicMdp& mdp, int goal) {
  mdp.validate_state(goal);
  AssumptionReport r;
  r.goal = goal;
  for (int s = 0; s < mdp.num_states() && r.a1.holds; ++s)
    for (int a = 0; a < mdp.num_actions(); ++a) {
      const int next = mdp.successor(s, a);
      if (next < 0 || next >= mdp.num_states()) {
        r.a1 = {false, "successor outside the state set", {s, a, next}};
        break;
      }
    }

  const auto layers = compute_layers(mdp, goal);
  for (int s = 0; s < mdp.num_states(); ++s)
    if (!layers.reachable(s)) {
      r.a2 = {false, "state cannot reach the goal", {s}};
      break;
    }

  std::pair<int, int> worst{-1, -1};
  r.delta_phi = layer_potential_gap(mdp, layers, &worst);
  if (!(r.delta_phi > 0.0))
    r.a3 = {false,
            "potential of a state in S_k does not exceed that of a state in S_{k-1} (pair: inner, outer)",
            {worst.first, worst.second}};
  return r;
}

AssumptionReport check_assumptions(const DeterministicMdp& mdp, const OfflineDataset& data, int goal) {
  AssumptionReport r = check_structure(mdp, goal);
  const auto layers = compute_layers(mdp, goal);
  for (const auto& tr : data.tuples) {
    if (r.a1.holds && mdp.successor(tr.s, tr.a) != tr.s_next) {
      r.a1 = {false, "dataset tuple disagrees with the successor function",
              {tr.traj_id, tr.t, tr.s, tr.a, tr.s_next, tr.a_next}};
    }
    const int k = layers.step(tr.s);
    const int k_next = layers.step(tr.s_next);
    const bool farther = k != kUnreachable && (k_next == kUnreachable || k_next > k);
    if (r.a4.holds && farther)
      r.a4 = {false, "behavioural transition moves away from the goal",
              {tr.traj_id, tr.t, tr.s, tr.a, tr.s_next, tr.a_next}};
  }
  return r;
}

AssumptionReport check_assumptions(const DeterministicMdp& mdp, const PolicyTable& policy, int goal) {
  validate_policy(mdp, policy);
  AssumptionReport r = check_structure(mdp, goal);
  const auto layers = compute_layers(mdp, goal);
  for (int s = 0; s < mdp.num_states() && r.a4.holds; ++s) {
    if (!layers.reachable(s)) continue;
    for (int a = 0; a < mdp.num_actions(); ++a) {
      if (policy(s, a) <= 0.0) continue;
      const int next = mdp.successor(s, a);
      if (!layers.reachable(next) || layers.step(next) > layers.step(s)) {
        r.a4 = {false, "policy puts mass on an action that moves away from the goal", {s, a, next}};
        break;
      }
    }
  }
  return r;
}

}  // namespace ors::envs
