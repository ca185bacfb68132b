#include "ors/envs/dataset.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ors/common/error.hpp"
#include "ors/common/parallel.hpp"
#include "ors/envs/layers.hpp"

namespace ors::envs {

namespace {

int draw_from(const std::vector<int>& options, Rng& rng) {
  return options[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(options.size())))];
}

int sample_row(const PolicyTable& pi, int s, Rng& rng) {
  double u = rng.uniform();
  const auto n = static_cast<int>(pi.cols());
  for (int a = 0; a < n; ++a) {
    u -= pi(s, a);
    if (u < 0.0) return a;
  }
  for (int a = n - 1; a >= 0; --a)
    if (pi(s, a) > 0.0) return a;
  return n - 1;
}

nlohmann::json coords_json(const DeterministicMdp& mdp, int s) {
  auto x = mdp.embedding(s);
  return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace

std::string PolicySpec::describe() const {
  switch (kind) {
    case Kind::uniform_random:
      return "uniform";
    case Kind::epsilon_greedy_random_goals:
      return "epsilon-greedy(eps=" + std::to_string(epsilon) + ")";
    case Kind::layer_monotone:
      return "layer-monotone(goal=" + std::to_string(goal) + ")";
  }
  return "unknown";
}

PolicySpec PolicySpec::parse(const std::string& name) {
  PolicySpec spec;
  if (name == "uniform" || name == "uniform-random")
    spec.kind = Kind::uniform_random;
  else if (name == "epsilon-greedy")
    spec.kind = Kind::epsilon_greedy_random_goals;
  else if (name == "layer-monotone")
    spec.kind = Kind::layer_monotone;
  else
    throw std::invalid_argument("unknown policy '" + name + "' (expected uniform, epsilon-greedy, layer-monotone)");
  return spec;
}

void OfflineDataset::append_trajectory(const std::vector<int>& states, const std::vector<int>& actions) {
  if (states.size() < 2 || states.size() != actions.size())
    throw ShapeError("trajectory needs H + 1 states and H + 1 actions with H >= 1");
  const int id = num_trajectories();
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    tuples.push_back({id, static_cast<int>(i), states[i], actions[i], states[i + 1], actions[i + 1]});
  offsets.push_back(tuples.size());
}

OfflineDataset generate_dataset(const DeterministicMdp& mdp, const PolicySpec& spec, int n_trajectories, int horizon,
                                const Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (n_trajectories < 0) throw std::invalid_argument("trajectory count must be non-negative");

  const int n = mdp.num_states();
  PolicyTable fixed;
  std::vector<LayerDecomposition> per_goal;
  switch (spec.kind) {
    case PolicySpec::Kind::uniform_random:
      fixed = uniform_policy(mdp);
      break;
    case PolicySpec::Kind::layer_monotone:
      mdp.validate_state(spec.goal);
      fixed = layer_monotone_policy(mdp, compute_layers(mdp, spec.goal));
      break;
    case PolicySpec::Kind::epsilon_greedy_random_goals:
      if (spec.epsilon < 0.0 || spec.epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
      per_goal.reserve(static_cast<std::size_t>(n));
      for (int g = 0; g < n; ++g) per_goal.push_back(compute_layers(mdp, g));
      break;
  }

  std::vector<std::vector<int>> states(static_cast<std::size_t>(n_trajectories));
  std::vector<std::vector<int>> actions(static_cast<std::size_t>(n_trajectories));
  parallel_for(static_cast<std::size_t>(n_trajectories), [&](std::size_t i) {
    Rng local = rng.split(static_cast<std::uint64_t>(i));
    auto& xs = states[i];
    auto& us = actions[i];
    int s = local.uniform_int(n);
    int goal = -1;
    auto pick = [&](int state) {
      if (spec.kind != PolicySpec::Kind::epsilon_greedy_random_goals) return sample_row(fixed, state, local);
      while (goal < 0 || goal == state) goal = local.uniform_int(n);
      if (local.bernoulli(spec.epsilon)) return local.uniform_int(mdp.num_actions());
      auto best = per_goal[static_cast<std::size_t>(goal)].shortest_actions(mdp, state);
      if (best.empty()) return local.uniform_int(mdp.num_actions());
      return draw_from(best, local);
    };
    for (int t = 0; t <= horizon; ++t) {
      const int a = pick(s);
      xs.push_back(s);
      us.push_back(a);
      s = mdp.successor(s, a);
    }
  });

  OfflineDataset out;
  out.policy = spec;
  out.tuples.reserve(static_cast<std::size_t>(n_trajectories) * static_cast<std::size_t>(horizon));
  for (int i = 0; i < n_trajectories; ++i)
    out.append_trajectory(states[static_cast<std::size_t>(i)], actions[static_cast<std::size_t>(i)]);
  return out;
}

PolicyTable empirical_policy(const DeterministicMdp& mdp, const OfflineDataset& data) {
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(mdp.num_states(), mdp.num_actions());
  for (int traj = 0; traj < data.num_trajectories(); ++traj) {
    const auto begin = data.trajectory_begin(traj);
    const auto end = data.trajectory_end(traj);
    for (auto i = begin; i < end; ++i) counts(data.tuples[i].s, data.tuples[i].a) += 1.0;
    if (end > begin) counts(data.tuples[end - 1].s_next, data.tuples[end - 1].a_next) += 1.0;
  }
  PolicyTable pi(mdp.num_states(), mdp.num_actions());
  for (int s = 0; s < mdp.num_states(); ++s) {
    const double total = counts.row(s).sum();
    if (total > 0.0)
      pi.row(s) = counts.row(s) / total;
    else
      pi.row(s).setConstant(1.0 / mdp.num_actions());
  }
  return pi;
}

std::vector<int> visit_counts(const DeterministicMdp& mdp, const OfflineDataset& data) {
  std::vector<int> counts(static_cast<std::size_t>(mdp.num_states()), 0);
  for (int traj = 0; traj < data.num_trajectories(); ++traj) {
    const auto begin = data.trajectory_begin(traj);
    const auto end = data.trajectory_end(traj);
    for (auto i = begin; i < end; ++i) ++counts[static_cast<std::size_t>(data.tuples[i].s)];
    if (end > begin) ++counts[static_cast<std::size_t>(data.tuples[end - 1].s_next)];
  }
  return counts;
}

void write_jsonl(const OfflineDataset& data, const DeterministicMdp& mdp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& tr : data.tuples) {
    nlohmann::json line{{"traj_id", tr.traj_id}, {"t", tr.t},           {"s", coords_json(mdp, tr.s)},
                        {"a", tr.a},             {"s_next", coords_json(mdp, tr.s_next)}, {"a_next", tr.a_next}};
    out << line.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

OfflineDataset read_jsonl(const std::filesystem::path& path, const DeterministicMdp& mdp) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto state_of = [&](const nlohmann::json& j, int line) {
    std::vector<double> v = j.get<std::vector<double>>();
    const int s = mdp.state_at(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    if (s < 0) throw ParseError("state coordinates do not match any state", line);
    return s;
  };

  OfflineDataset out;
  std::string text;
  int line = 0;
  int current = -1;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line);
    }
    Transition tr;
    try {
      tr = {j.at("traj_id").get<int>(), j.at("t").get<int>(),      state_of(j.at("s"), line),
            j.at("a").get<int>(),       state_of(j.at("s_next"), line), j.at("a_next").get<int>()};
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line);
    }
    mdp.validate_action(tr.a);
    mdp.validate_action(tr.a_next);
    if (tr.traj_id != current) {
      if (current >= 0) out.offsets.push_back(out.tuples.size());
      current = tr.traj_id;
    }
    out.tuples.push_back(tr);
  }
  if (current >= 0) out.offsets.push_back(out.tuples.size());
  return out;
}

}  // namespace ors::envs
