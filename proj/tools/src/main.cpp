#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ors/common/error.hpp"
#include "ors_lab/commands.hpp"
#include "ors_lab/config.hpp"

using namespace ors::lab;

int main(int argc, char** argv) {
  CLI::App app{"ors-lab: occupancy-based reward shaping experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::int64_t> seed;
  std::optional<std::string> out;
  std::string stage = "all";
  std::string which = "all";
  bool untrained = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML run config (defaults apply when omitted)");
    sub->add_option("--seed", seed, "root seed, overrides run.seed");
    sub->add_option("--out", out, "output directory, overrides run.out");
  };

  auto* gen = app.add_subcommand("gen-data", "roll out the behaviour policy and check assumptions");
  auto* train = app.add_subcommand("train", "train the occupancy model, reward net and policy");
  auto* verify = app.add_subcommand("verify", "check the monotonicity and bound claims");
  auto* analyze = app.add_subcommand("analyze", "noisy value sweep and reward field dump");
  auto* eval = app.add_subcommand("eval", "evaluate the trained policy");
  auto* dump = app.add_subcommand("print-config", "print the effective config");
  for (auto* sub : {gen, train, verify, analyze, eval, dump}) common(sub);
  train->add_option("--stage", stage, "occupancy | reward | policy | all")
      ->check(CLI::IsMember({"occupancy", "reward", "policy", "all"}));
  verify->add_option("--which", which, "prop1 | prop2 | theorem1 | all")
      ->check(CLI::IsMember({"prop1", "prop2", "theorem1", "all"}));
  verify->add_flag("--untrained", untrained, "run prop2 on a freshly initialised network");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version land here with a zero code; usage errors map to the error code
    return app.exit(e) == 0 ? kExitClean : kExitError;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) config.run.seed = *seed;
    if (out) config.run.out = *out;

    if (gen->parsed()) return cmd_gen_data(config);
    if (train->parsed()) return cmd_train(config, parse_stage(stage));
    if (verify->parsed()) return cmd_verify(config, parse_which(which), untrained);
    if (analyze->parsed()) return cmd_analyze(config);
    if (eval->parsed()) return cmd_eval(config);
    if (dump->parsed()) {
      std::cout << to_toml(config);
      return kExitClean;
    }
  } catch (const ors::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const PrerequisiteError& e) {
    std::cerr << "missing prerequisite: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
