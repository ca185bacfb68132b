#include "ors_lab/commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ors/analysis/field_dump.hpp"
#include "ors/analysis/value_trace.hpp"
#include "ors/common/rng.hpp"
#include "ors/envs/assumptions.hpp"
#include "ors/envs/dataset.hpp"
#include "ors/envs/embedding.hpp"
#include "ors/envs/layers.hpp"
#include "ors/envs/maze_family.hpp"
#include "ors/exact/occupancy.hpp"
#include "ors/exact/verify.hpp"
#include "ors/exact/wasserstein.hpp"
#include "ors/flow/training.hpp"
#include "ors/gcrl/evaluate.hpp"
#include "ors/gcrl/tabular_gciql.hpp"
#include "ors/nn/checkpoint.hpp"
#include "ors/reward/prop2.hpp"
#include "ors/reward/reward_net.hpp"
#include "ors/reward/shaped_reward.hpp"
#include "ors_lab/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ors::lab {

namespace {

fs::path out_dir(const RunConfig& config) { return fs::path(config.run.out); }

Rng root_rng(const RunConfig& config) { return Rng(static_cast<std::uint64_t>(config.run.seed)); }

void prepare_out(const RunConfig& config) {
  const fs::path out = out_dir(config);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw std::runtime_error("cannot create output directory " + out.string());
  const fs::path probe = out / ".write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw std::runtime_error("output directory " + out.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << std::setprecision(17);
  return f;
}

void write_text(const fs::path& path, const std::string& text) { open_out(path) << text; }

void write_report(const fs::path& path, const json& doc) { open_out(path) << doc.dump(2) << "\n"; }

void record(Manifest& m, const fs::path& file, const std::string& command) { m.record(file, command); }

void finish_manifest(Manifest& m, const RunConfig& config) {
  m.set("seed", config.run.seed);
  m.set("config_sha256", config_hash(config));
  m.save();
}

void check_hash(const json& doc, const RunConfig& config, const std::string& what) {
  const std::string expected = config_hash(config);
  if (!doc.contains("config_sha256") || doc["config_sha256"].get<std::string>() != expected)
    std::cerr << "warning: " << what << " was written under a different config\n";
}

json read_checkpoint(const fs::path& path, const std::string& stage) {
  if (!fs::exists(path))
    throw PrerequisiteError(path.filename().string() + " not found in " + path.parent_path().string() +
                            ": run `train --stage " + stage + "` first");
  return nn::read_json(path);
}

envs::OfflineDataset load_dataset(const RunConfig& config, const envs::DeterministicMdp& mdp) {
  const fs::path path = out_dir(config) / "dataset.jsonl";
  if (!fs::exists(path)) throw PrerequisiteError("dataset.jsonl not found: run gen-data first");
  return envs::read_jsonl(path, mdp);
}

std::vector<int> to_ints(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

flow::OccupancyTrainConfig occupancy_config(const RunConfig& c) {
  flow::OccupancyTrainConfig o;
  o.hidden = to_ints(c.occupancy.hidden);
  o.layer_norm = c.occupancy.layer_norm;
  o.gamma = c.env.gamma;
  o.pretrain_steps = static_cast<int>(c.occupancy.pretrain_steps);
  o.flow_loss_steps = static_cast<int>(c.occupancy.flow_loss_steps);
  o.flow_steps_train = static_cast<int>(c.occupancy.flow_steps_train);
  o.flow_steps_sample = static_cast<int>(c.occupancy.flow_steps_sample);
  o.batch_size = static_cast<int>(c.occupancy.batch);
  o.lr = c.occupancy.lr;
  o.final_lr_ratio = c.occupancy.final_lr_ratio;
  o.target_rate = c.occupancy.target_rate;
  o.future_target_mode = flow::parse_future_target_mode(c.occupancy.future_target_mode);
  return o;
}

reward::RewardTrainConfig reward_config(const RunConfig& c) {
  reward::RewardTrainConfig r;
  r.hidden = to_ints(c.reward.hidden);
  r.layer_norm = c.reward.layer_norm;
  r.steps = static_cast<int>(c.reward.steps);
  r.batch_size = static_cast<int>(c.reward.batch);
  r.mc_draws = static_cast<int>(c.reward.mc_draws);
  r.lr = c.reward.lr;
  r.scale = c.reward.scale;
  r.sampler = {c.reward.p_cur, c.reward.p_traj, c.reward.p_rand, true, c.env.gamma};
  return r;
}

gcrl::GciqlConfig gciql_config(const RunConfig& c) {
  gcrl::GciqlConfig g;
  g.kappa = c.gcrl.kappa;
  g.alpha = c.gcrl.alpha;
  g.gamma = c.env.gamma;
  g.batch_size = static_cast<int>(c.gcrl.batch);
  g.steps = static_cast<int>(c.gcrl.steps);
  g.table_lr = c.gcrl.table_lr;
  g.target_rate = c.gcrl.target_rate;
  g.critic_sampler = {c.gcrl.critic_p_cur, c.gcrl.critic_p_traj, c.gcrl.critic_p_rand, true, c.env.gamma};
  g.actor_sampler = {c.gcrl.actor_p_cur, c.gcrl.actor_p_traj, c.gcrl.actor_p_rand, true, c.env.gamma};
  return g;
}

json occupancy_checkpoint(const flow::VelocityFieldNet& net, const RunConfig& config) {
  return {{"kind", "occupancy"},
          {"config_sha256", config_hash(config)},
          {"state_dim", net.state_dim},
          {"action_dim", net.action_dim},
          {"gamma", config.env.gamma},
          {"target_rate", net.target.rate},
          {"online", nn::mlp_to_json(net.online, &net.adam)},
          {"target", nn::mlp_to_json(net.target.shadow)}};
}

flow::VelocityFieldNet load_occupancy(const RunConfig& config) {
  const json doc = read_checkpoint(out_dir(config) / "occupancy.json", "occupancy");
  check_hash(doc, config, "occupancy.json");
  flow::VelocityFieldNet net(nn::mlp_from_json(doc.at("online")), doc.at("state_dim").get<int>(),
                             doc.at("action_dim").get<int>(), config.occupancy.lr, doc.at("target_rate").get<double>());
  net.target.shadow = nn::mlp_from_json(doc.at("target"));
  if (auto adam = nn::adam_from_json(doc.at("online"))) net.adam = *adam;
  return net;
}

reward::RewardNet load_reward(const RunConfig& config) {
  const json doc = read_checkpoint(out_dir(config) / "reward.json", "reward");
  check_hash(doc, config, "reward.json");
  reward::RewardNet net;
  net.net = nn::mlp_from_json(doc.at("net"));
  if (auto adam = nn::adam_from_json(doc.at("net"))) net.adam = *adam;
  net.state_dim = doc.at("state_dim").get<int>();
  net.action_dim = doc.at("action_dim").get<int>();
  net.scale = doc.at("scale").get<double>();
  return net;
}

std::vector<int> all_states(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

exact::RewardTable exact_shaped_table(const envs::DeterministicMdp& mdp, const envs::OfflineDataset& data,
                                      double scale) {
  const auto occ = exact::solve_occupancy(mdp, envs::empirical_policy(mdp, data), mdp.gamma());
  return exact::shaped_reward_exact(exact::wasserstein_all_goals(occ, mdp), scale);
}

// ---- train stages ----

void train_occupancy_stage(const RunConfig& config, const Environment& env, Manifest& manifest) {
  const auto data = load_dataset(config, env.mdp);
  const auto emb = envs::embed(env.mdp, data);
  const auto result = flow::train_occupancy(emb, occupancy_config(config), root_rng(config).split("occupancy"));
  const fs::path out = out_dir(config);
  write_report(out / "occupancy.json", occupancy_checkpoint(result.net, config));
  auto csv = open_out(out / "occupancy_loss.csv");
  csv << "phase,step,total,next,future\n";
  for (std::size_t i = 0; i < result.pretrain_losses.size(); ++i)
    csv << "pretrain," << i << "," << result.pretrain_losses[i] << ",,\n";
  for (std::size_t i = 0; i < result.flow_losses.size(); ++i) {
    const auto& t = result.flow_losses[i];
    csv << "flow," << i << "," << t.total << "," << t.next << "," << t.future << "\n";
  }
  csv.close();
  record(manifest, out / "occupancy.json", "train");
  record(manifest, out / "occupancy_loss.csv", "train");
  std::cerr << "occupancy: " << result.pretrain_losses.size() << " warm-start and " << result.flow_losses.size()
            << " flow steps\n";
}

void train_reward_stage(const RunConfig& config, const Environment& env, Manifest& manifest) {
  const auto occupancy = load_occupancy(config);
  const auto data = load_dataset(config, env.mdp);
  std::vector<double> losses;
  const auto net =
      reward::train_reward(occupancy, envs::embed(env.mdp, data), reward_config(config), root_rng(config).split("reward"),
                           &losses);
  const fs::path out = out_dir(config);
  write_report(out / "reward.json", {{"kind", "reward"},
                                     {"config_sha256", config_hash(config)},
                                     {"state_dim", net.state_dim},
                                     {"action_dim", net.action_dim},
                                     {"scale", net.scale},
                                     {"net", nn::mlp_to_json(net.net, &net.adam)}});
  auto csv = open_out(out / "reward_loss.csv");
  csv << "step,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) csv << i << "," << losses[i] << "\n";
  csv.close();
  record(manifest, out / "reward.json", "train");
  record(manifest, out / "reward_loss.csv", "train");
  std::cerr << "reward: " << losses.size() << " steps\n";
}

gcrl::EvalResult evaluate_actions(const RunConfig& config, const Environment& env,
                                  const std::vector<std::vector<int>>& actions) {
  const auto policy = [&](int s, int g) { return actions[static_cast<std::size_t>(s)][static_cast<std::size_t>(g)]; };
  return gcrl::evaluate_policy(env.mdp, policy, all_states(env.mdp.num_states()),
                               static_cast<int>(config.gcrl.eval_episodes), static_cast<int>(config.gcrl.eval_horizon),
                               root_rng(config).split("eval"));
}

std::vector<std::vector<int>> action_table(const gcrl::TabularGciql& agent, int n) {
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int s = 0; s < n; ++s)
    for (int g = 0; g < n; ++g) table[static_cast<std::size_t>(s)][static_cast<std::size_t>(g)] = agent.act(s, g);
  return table;
}

void train_policy_stage(const RunConfig& config, const Environment& env, Manifest& manifest) {
  const auto data = load_dataset(config, env.mdp);
  const int n = env.mdp.num_states();
  const auto goals = all_states(n);
  exact::RewardTable table;
  if (config.gcrl.reward == "ors") {
    table = reward::ShapedRewardSource::distilled(load_reward(config), env.mdp).table(goals);
  } else if (config.gcrl.reward == "ors-exact") {
    table = exact_shaped_table(env.mdp, data, config.reward.scale);
  } else if (config.gcrl.reward == "sparse") {
    table = exact::sparse_reward_table(env.mdp, goals);
  } else {
    throw std::invalid_argument("gcrl.reward must be ors, ors-exact or sparse, got '" + config.gcrl.reward + "'");
  }

  const auto cfg = gciql_config(config);
  const Rng policy_rng = root_rng(config).split("policy");

  gcrl::TabularGciql agent(env.mdp, data, cfg);
  std::vector<gcrl::GciqlLosses> log;
  Rng rng = policy_rng;
  agent.train(table, rng, &log);

  gcrl::TabularGciql control(env.mdp, data, cfg);
  Rng control_rng = policy_rng;
  control.train(exact::sparse_reward_table(env.mdp, goals), control_rng);

  const auto actions = action_table(agent, n);
  const auto result = evaluate_actions(config, env, actions);
  const auto control_result = evaluate_actions(config, env, action_table(control, n));

  const fs::path out = out_dir(config);
  write_report(out / "policy.json", {{"kind", "policy"},
                                     {"config_sha256", config_hash(config)},
                                     {"reward", config.gcrl.reward},
                                     {"actions", actions}});
  auto loss_csv = open_out(out / "policy_loss.csv");
  loss_csv << "step,v,q\n";
  for (std::size_t i = 0; i < log.size(); ++i) loss_csv << i << "," << log[i].v << "," << log[i].q << "\n";
  loss_csv.close();
  auto eval_csv = open_out(out / "eval.csv");
  eval_csv << "reward,success_rate,mean_return\n";
  eval_csv << config.gcrl.reward << "," << result.success_rate << "," << result.mean_return << "\n";
  eval_csv << "sparse-control," << control_result.success_rate << "," << control_result.mean_return << "\n";
  eval_csv.close();
  for (const char* f : {"policy.json", "policy_loss.csv", "eval.csv"}) record(manifest, out / f, "train");
  std::cerr << "policy (" << config.gcrl.reward << "): eval_success " << result.success_rate
            << ", sparse control " << control_result.success_rate << "\n";
}

// ---- verify ----

struct Instance {
  envs::DeterministicMdp mdp;
  std::vector<int> goals;
  std::string label;
};

std::vector<Instance> verify_instances(const RunConfig& config) {
  std::vector<Instance> out;
  if (config.env.maze == "family") {
    envs::MazeFamilyConfig fam;
    fam.num_mazes = static_cast<int>(config.verify.family_mazes);
    fam.goals_per_maze = static_cast<int>(config.verify.goals_per_maze);
    const auto family = envs::generate_maze_family(fam, root_rng(config).split("verify"));
    for (double gamma : config.verify.gammas)
      for (std::size_t i = 0; i < family.size(); ++i) {
        Instance inst{family[i].maze.to_mdp(gamma), family[i].goals, "family[" + std::to_string(i) + "]"};
        inst.mdp.name = inst.label;
        out.push_back(std::move(inst));
      }
    return out;
  }
  const Environment env = make_environment(config);
  std::vector<int> goals = to_ints(config.verify.goals);
  if (goals.empty()) goals = all_states(env.mdp.num_states());
  for (int g : goals) env.mdp.validate_state(g);
  out.push_back({env.mdp, goals, config.env.maze});
  return out;
}

struct Tally {
  long instances = 0;
  long clean = 0;
  long unmet = 0;
  long violations = 0;

  void add(const exact::VerificationReport& r) {
    ++instances;
    if (!r.preconditions_met) ++unmet;
    else if (r.violation_count > 0) violations += r.violation_count;
    else ++clean;
  }
  int exit_code() const {
    if (violations > 0) return kExitViolation;
    if (unmet > 0) return kExitPreconditions;
    return kExitClean;
  }
  json to_json() const {
    return {{"instances", instances}, {"clean", clean}, {"preconditions_unmet", unmet}, {"violations", violations}};
  }
};

int verify_exact(const RunConfig& config, bool theorem, Manifest& manifest) {
  Tally tally;
  json items = json::array();
  for (const auto& inst : verify_instances(config)) {
    for (int g : inst.goals) {
      const auto layers = envs::compute_layers(inst.mdp, g);
      const auto policy = envs::layer_monotone_policy(inst.mdp, layers);
      json item;
      if (theorem) {
        const auto r = exact::verify_theorem1(inst.mdp, policy, g, config.verify.tol);
        tally.add(r);
        item = r.to_json();
      } else {
        const auto r = exact::verify_prop1(inst.mdp, policy, g, config.verify.tol);
        tally.add(r);
        item = r.to_json();
      }
      item["instance"] = inst.label;
      item["goal"] = g;
      items.push_back(std::move(item));
    }
  }
  const int code = tally.exit_code();
  const std::string name = theorem ? "theorem1" : "prop1";
  json doc{{"check", name}, {"summary", tally.to_json()}, {"instances", std::move(items)}};
  doc["status"] = code == kExitClean ? "clean" : code == kExitViolation ? "violation" : "preconditions unmet";
  const fs::path path = out_dir(config) / (name + ".json");
  write_report(path, doc);
  record(manifest, path, "verify");
  std::cerr << name << ": " << tally.instances << " instances, " << tally.clean << " clean, " << tally.unmet
            << " preconditions unmet, " << tally.violations << " violations\n";
  return code;
}

int verify_prop2(const RunConfig& config, bool untrained, Manifest& manifest) {
  const Environment env = make_environment(config);
  const auto data = load_dataset(config, env.mdp);
  flow::VelocityFieldNet net;
  if (untrained) {
    Rng init = root_rng(config).split("occupancy").split("init");
    net = flow::VelocityFieldNet(env.mdp.embedding_dim(), env.mdp.num_actions(), to_ints(config.occupancy.hidden),
                                 config.occupancy.layer_norm, init, config.occupancy.lr, config.occupancy.target_rate);
  } else {
    net = load_occupancy(config);
  }
  const auto occ = exact::solve_occupancy(env.mdp, envs::empirical_policy(env.mdp, data), env.mdp.gamma());
  const auto m = exact::wasserstein_all_goals(occ, env.mdp);
  Rng rng = root_rng(config).split("prop2");
  auto report = reward::validate_prop2(net, env.mdp, m, reward::all_triples(env.mdp),
                                       static_cast<int>(config.verify.prop2_draws), rng);
  if (untrained) {
    report.diagnostic_only = true;
    report.warning = "occupancy network is untrained; the constant and correlation are diagnostic only";
  }
  json doc = report.to_json();
  doc["check"] = "prop2";
  const int code = untrained || report.finite_bound() ? kExitClean : kExitViolation;
  doc["status"] = code == kExitClean ? "clean" : "violation";
  const fs::path path = out_dir(config) / "prop2.json";
  write_report(path, doc);
  record(manifest, path, "verify");
  std::cerr << "prop2: " << report.triples << " triples, C_hat " << report.c_hat << ", spearman "
            << report.spearman_rho << ", " << report.violations.size() << " violations"
            << (untrained ? " (untrained, diagnostic only)" : "") << "\n";
  return code;
}

}  // namespace

Stage parse_stage(const std::string& name) {
  if (name == "occupancy") return Stage::occupancy;
  if (name == "reward") return Stage::reward;
  if (name == "policy") return Stage::policy;
  if (name == "all") return Stage::all;
  throw std::invalid_argument("unknown stage '" + name + "' (occupancy, reward, policy, all)");
}

Which parse_which(const std::string& name) {
  if (name == "prop1") return Which::prop1;
  if (name == "prop2") return Which::prop2;
  if (name == "theorem1") return Which::theorem1;
  if (name == "all") return Which::all;
  throw std::invalid_argument("unknown check '" + name + "' (prop1, prop2, theorem1, all)");
}

Environment make_environment(const RunConfig& config) {
  if (config.env.maze == "family") throw std::invalid_argument("env.maze = \"family\" is only meaningful for verify");
  auto maze = envs::grid_maze_from_name(config.env.maze);
  auto mdp = maze.to_mdp(config.env.gamma);
  mdp.name = config.env.maze;
  int goal = mdp.num_states() - 1;
  if (config.env.goal >= 0) {
    goal = static_cast<int>(config.env.goal);
    mdp.validate_state(goal);
  } else if (auto marked = maze.marked_goal()) {
    goal = *marked;
  }
  return {std::move(maze), std::move(mdp), goal};
}

int cmd_gen_data(const RunConfig& config) {
  const Environment env = make_environment(config);
  prepare_out(config);
  auto spec = envs::PolicySpec::parse(config.dataset.policy);
  spec.epsilon = config.dataset.epsilon;
  if (spec.kind == envs::PolicySpec::Kind::layer_monotone) spec.goal = env.goal;
  const Rng rng = root_rng(config).split("dataset").split(static_cast<std::uint64_t>(config.dataset.seed));
  const auto data = envs::generate_dataset(env.mdp, spec, static_cast<int>(config.dataset.n_trajectories),
                                           static_cast<int>(config.dataset.horizon), rng);
  const fs::path out = out_dir(config);
  envs::write_jsonl(data, env.mdp, out / "dataset.jsonl");
  const auto report = envs::check_assumptions(env.mdp, data, env.goal);
  write_report(out / "assumptions.json", report.to_json());
  write_text(out / "config.toml", to_toml(config));
  Manifest manifest(out);
  for (const char* f : {"dataset.jsonl", "assumptions.json", "config.toml"}) record(manifest, out / f, "gen-data");
  finish_manifest(manifest, config);
  std::cerr << "gen-data: " << data.num_trajectories() << " trajectories, " << data.size() << " tuples; A1-A4 "
            << (report.all_hold() ? "hold" : "do not all hold") << " for goal " << env.goal << "\n";
  return kExitClean;
}

int cmd_train(const RunConfig& config, Stage stage) {
  const Environment env = make_environment(config);
  prepare_out(config);
  Manifest manifest(out_dir(config));
  if (stage == Stage::occupancy || stage == Stage::all) train_occupancy_stage(config, env, manifest);
  if (stage == Stage::reward || stage == Stage::all) train_reward_stage(config, env, manifest);
  if (stage == Stage::policy || stage == Stage::all) train_policy_stage(config, env, manifest);
  finish_manifest(manifest, config);
  return kExitClean;
}

int cmd_verify(const RunConfig& config, Which which, bool untrained) {
  prepare_out(config);
  Manifest manifest(out_dir(config));
  int code = kExitClean;
  auto merge = [&](int c) {
    if (c == kExitViolation || (c == kExitPreconditions && code == kExitClean)) code = c;
  };
  if (which == Which::prop1 || which == Which::all) merge(verify_exact(config, false, manifest));
  if (which == Which::theorem1 || which == Which::all) merge(verify_exact(config, true, manifest));
  if (which == Which::prop2 || (which == Which::all && config.env.maze != "family"))
    merge(verify_prop2(config, untrained, manifest));
  finish_manifest(manifest, config);
  return code;
}

int cmd_analyze(const RunConfig& config) {
  const Environment env = make_environment(config);
  prepare_out(config);
  const auto absorbing = env.mdp.with_absorbing_goal(env.goal);
  const auto layers = envs::compute_layers(absorbing, env.goal);
  const auto policy = envs::layer_monotone_policy(absorbing, layers);
  const auto occ = exact::solve_occupancy(absorbing, policy, absorbing.gamma());
  const auto m = exact::wasserstein_to_goal(occ, absorbing, env.goal);
  const double scale = config.reward.scale;
  const analysis::RewardFn reward_fn = [&](int s, int a, int g) { return -m.at(s, a, g) / scale; };

  std::vector<analysis::ExpertTrajectory> trajectories;
  for (int s = 0; s < absorbing.num_states(); ++s)
    if (layers.reachable(s) && s != env.goal)
      trajectories.push_back(analysis::shortest_path_trajectory(absorbing, layers, s));

  std::vector<analysis::RewardMode> modes;
  for (const auto& name : config.analysis.modes) modes.push_back(analysis::parse_reward_mode(name));
  const auto rows = analysis::sweep_sigma(trajectories, reward_fn, modes, config.analysis.sigmas,
                                          static_cast<int>(config.analysis.seeds), absorbing.gamma(),
                                          root_rng(config).split("analysis").seed());
  const fs::path out = out_dir(config);
  analysis::write_sweep_csv(rows, out / "sweep.csv");

  json ordering = json::array();
  bool ordering_holds = true;
  for (const auto& sparse : rows) {
    if (sparse.mode != analysis::RewardMode::sparse) continue;
    for (const auto& ors : rows) {
      if (ors.mode != analysis::RewardMode::ors || ors.sigma != sparse.sigma) continue;
      const bool holds = sparse.sigma == 0.0 ? ors.mean_delta_v == 0.0 : ors.mean_delta_v < sparse.mean_delta_v;
      ordering_holds = ordering_holds && holds;
      ordering.push_back({{"sigma", sparse.sigma},
                          {"sparse", sparse.mean_delta_v},
                          {"ors", ors.mean_delta_v},
                          {"ors_below_sparse", holds}});
      std::cerr << "sigma " << sparse.sigma << ": delta_V sparse " << sparse.mean_delta_v << ", ors "
                << ors.mean_delta_v
                << (holds ? "  ok" : ors.mean_delta_v == sparse.mean_delta_v ? "  tie" : "  ordering fails") << "\n";
    }
  }

  const auto field = analysis::reward_field_dump(absorbing, reward_fn, env.goal);
  analysis::write_field_csv(field, out / "field.csv");
  write_report(out / "analysis.json", {{"goal", env.goal},
                                       {"trajectories", trajectories.size()},
                                       {"ordering", ordering},
                                       {"ordering_holds", ordering_holds},
                                       {"field_spearman_vs_steps", field.spearman_vs_steps}});
  std::cerr << "field: spearman(-max_a r, steps) = " << field.spearman_vs_steps << "\n";
  Manifest manifest(out);
  for (const char* f : {"sweep.csv", "field.csv", "analysis.json"}) record(manifest, out / f, "analyze");
  finish_manifest(manifest, config);
  return kExitClean;
}

int cmd_eval(const RunConfig& config) {
  const Environment env = make_environment(config);
  const json doc = read_checkpoint(out_dir(config) / "policy.json", "policy");
  check_hash(doc, config, "policy.json");
  const auto actions = doc.at("actions").get<std::vector<std::vector<int>>>();
  if (actions.size() != static_cast<std::size_t>(env.mdp.num_states()))
    throw std::invalid_argument("policy.json does not match the configured environment");
  const auto result = evaluate_actions(config, env, actions);
  const fs::path out = out_dir(config);
  write_report(out / "eval.json", {{"reward", doc.at("reward")},
                                   {"success_rate", result.success_rate},
                                   {"mean_return", result.mean_return},
                                   {"per_goal", result.per_goal}});
  Manifest manifest(out);
  record(manifest, out / "eval.json", "eval");
  finish_manifest(manifest, config);
  std::cerr << "eval: success " << result.success_rate << ", mean return " << result.mean_return << "\n";
  return kExitClean;
}

}  // namespace ors::lab
