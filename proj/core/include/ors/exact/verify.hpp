#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ors/envs/assumptions.hpp"
#include "ors/envs/mdp.hpp"
#include "ors/exact/wasserstein.hpp"

namespace ors::exact {

struct Violation {
  std::string kind;
  std::vector<int> where;  ///< states / actions involved, meaning depends on kind
  double magnitude = 0.0;

  nlohmann::json to_json() const;
};

/// Shared shape of the exact verification reports.
struct VerificationReport {
  envs::AssumptionReport assumptions;
  bool preconditions_met = false;
  double gamma = 0.0;
  std::vector<Violation> violations;  ///< at most kMaxListed entries are kept
  long violation_count = 0;
  double max_violation_magnitude = 0.0;
  long instances_checked = 0;

  static constexpr std::size_t kMaxListed = 64;

  bool clean() const { return preconditions_met && violation_count == 0; }
  void record(Violation v);
  nlohmann::json to_json() const;
};

/// Layer monotonicity of M(s, g) and optimality of shortest-path actions under
/// M(s, a, g). The goal is made absorbing first; when any of A1-A4 fails the
/// report says preconditions are unmet and nothing is asserted.
VerificationReport verify_prop1(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy, int goal,
                                double tol = 1e-9);

struct Theorem1Report : VerificationReport {
  long states_matching = 0;   ///< states whose greedy argmax set lies inside the shortest-path set
  long states_compared = 0;
  double q_residual = 0.0;
  int q_iterations = 0;
  /// Layer value gap: min V*(S_{k-1}) - max V*(S_k) - (1 - gamma^{k-1}) Delta_Phi over k, negative means violated.
  double worst_gap_slack = 0.0;
  long gap_violations = 0;

  nlohmann::json to_json() const;
};

/// Greedy policy of exact Q iteration under r^W = -M versus BFS shortest-path
/// actions, plus the value gap between adjacent layers. `absorbing`
/// must already have an absorbing goal and `m` must contain the goal column.
Theorem1Report verify_theorem1(const envs::DeterministicMdp& absorbing, const WassersteinTable& m, int goal,
                               double gamma, const envs::AssumptionReport& assumptions, double tol = 1e-9);
/// Convenience form: builds the absorbing MDP, occupancy and M from the policy.
Theorem1Report verify_theorem1(const envs::DeterministicMdp& mdp, const envs::PolicyTable& policy, int goal,
                               double tol = 1e-9);

}  // namespace ors::exact
