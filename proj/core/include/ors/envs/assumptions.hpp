#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ors/envs/dataset.hpp"
#include "ors/envs/layers.hpp"
#include "ors/envs/mdp.hpp"

namespace ors::envs {

struct AssumptionCheck {
  bool holds = true;
  std::string detail;                ///< human-readable reason when violated
  std::vector<int> counterexample;   ///< offending states / tuple fields, empty when the check holds
};

/// Result of the four dataset-generation contracts for one goal:
///  A1 deterministic total successor (and every dataset tuple follows it),
///  A2 every state reaches the goal, so each S_k (k >= 1) has a step into S_{k-1},
///  A3 Phi(s, g) = |phi(s) - phi(g)|^2 separates adjacent layers,
///  A4 the behavioural policy never moves to a farther layer.
struct AssumptionReport {
  int goal = 0;
  AssumptionCheck a1, a2, a3, a4;
  /// min over k >= 1 of (min Phi on S_k - max Phi on S_{k-1}); positive iff A3 holds.
  double delta_phi = 0.0;

  bool all_hold() const { return a1.holds && a2.holds && a3.holds && a4.holds; }
  nlohmann::json to_json() const;
};

/// Assumption checks where A4 is judged on the dataset tuples (step*(s') <= step*(s)).
AssumptionReport check_assumptions(const DeterministicMdp& mdp, const OfflineDataset& data, int goal);
/// Same, with A4 judged on the support of a policy table over all states.
AssumptionReport check_assumptions(const DeterministicMdp& mdp, const PolicyTable& policy, int goal);
/// A1-A3 only; A4 left as holding.
AssumptionReport check_structure(const DeterministicMdp& mdp, int goal);

/// Empirical potential gap between adjacent layers (see AssumptionReport::delta_phi).
/// Returns +infinity when only S_0 exists.
double layer_potential_gap(const DeterministicMdp& mdp, const LayerDecomposition& layers,
                           std::pair<int, int>* worst_pair = nullptr);

}  // namespace ors::envs
