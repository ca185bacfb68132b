#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ors/common/rng.hpp"
#include "ors/envs/mdp.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/flow/velocity_field.hpp"

namespace ors::reward {

using Triple = std::array<int, 3>;  ///< (s, a, g)

struct Prop2Report {
  long triples = 0;
  double c_hat = 0.0;   ///< smallest C with W2^2 <= C * MSE on every triple
  double spearman_rho = 0.0;
  std::vector<Triple> violations;  ///< MSE = 0 while W2^2 > 0
  std::vector<double> exact;
  std::vector<double> estimate;
  bool diagnostic_only = false;
  std::string warning;

  bool finite_bound() const { return violations.empty() && std::isfinite(c_hat); }
  bool passes(double min_rho = 0.9) const { return finite_bound() && spearman_rho >= min_rho; }
  nlohmann::json to_json() const;
};

/// Every (s, a, g) of the MDP.
std::vector<Triple> all_triples(const envs::DeterministicMdp& mdp);

/// Pairs exact M(s, a, g) with the velocity-MSE estimate (n_draws shared noise
/// draws per triple) and reports the empirical constant and the rank correlation.
Prop2Report validate_prop2(const flow::VelocityFieldNet& net, const envs::DeterministicMdp& mdp,
                           const exact::WassersteinTable& m, const std::vector<Triple>& triples, int n_draws,
                           Rng& rng);

}  // namespace ors::reward
