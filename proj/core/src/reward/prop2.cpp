#include "ors/reward/prop2.hpp"

#include <cmath>
#include <limits>

#include "ors/common/stats.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/reward/w2_estimate.hpp"

namespace ors::reward {

nlohmann::json Prop2Report::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& t : violations) v.push_back(t);
  nlohmann::json j{{"triples", triples},
                   {"C_hat", std::isfinite(c_hat) ? nlohmann::json(c_hat) : nlohmann::json(nullptr)},
                   {"spearman_rho", spearman_rho},
                   {"violations", v}};
  if (diagnostic_only) j["diagnostic_only"] = true;
  if (!warning.empty()) j["warning"] = warning;
  return j;
}

std::vector<Triple> all_triples(const envs::DeterministicMdp& mdp) {
  std::vector<Triple> out;
  for (int s = 0; s < mdp.num_states(); ++s)
    for (int a = 0; a < mdp.num_actions(); ++a)
      for (int g = 0; g < mdp.num_states(); ++g) out.push_back({s, a, g});
  return out;
}

Prop2Report validate_prop2(const flow::VelocityFieldNet& net, const envs::DeterministicMdp& mdp,
                           const exact::WassersteinTable& m, const std::vector<Triple>& triples, int n_draws,
                           Rng& rng) {
  Prop2Report report;
  report.triples = static_cast<long>(triples.size());
  const auto n = static_cast<Eigen::Index>(triples.size());
  Eigen::MatrixXd s(mdp.embedding_dim(), n), a(mdp.num_actions(), n), g(mdp.embedding_dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& [si, ai, gi] = triples[static_cast<std::size_t>(j)];
    s.col(j) = mdp.embedding(si);
    a.col(j) = envs::one_hot(ai, mdp.num_actions());
    g.col(j) = mdp.embedding(gi);
  }
  const Eigen::MatrixXd x0 = rng.normal_matrix(mdp.embedding_dim(), n_draws);
  Eigen::RowVectorXd t(n_draws);
  for (int k = 0; k < n_draws; ++k) t(k) = rng.uniform();

  // Chunk the triples so the stacked batch stays a few MB.
  const Eigen::Index chunk = std::max<Eigen::Index>(1, 200000 / std::max(1, n_draws));
  Eigen::VectorXd mse(n);
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index len = std::min(chunk, n - start);
    mse.segment(start, len) = estimate_w2_with_noise(net.online, s.middleCols(start, len), a.middleCols(start, len),
                                                     g.middleCols(start, len), x0, t);
  }

  report.c_hat = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& [si, ai, gi] = triples[static_cast<std::size_t>(j)];
    const double w2 = m.at(si, ai, gi);
    report.exact.push_back(w2);
    report.estimate.push_back(mse(j));
    if (w2 <= 0.0) continue;
    if (mse(j) <= 0.0) {
      report.violations.push_back(triples[static_cast<std::size_t>(j)]);
      report.c_hat = std::numeric_limits<double>::infinity();
      continue;
    }
    report.c_hat = std::max(report.c_hat, w2 / mse(j));
  }
  report.spearman_rho = spearman(report.exact, report.estimate);
  return report;
}

}  // namespace ors::reward
