#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ors/envs/grid_maze.hpp"
#include "ors/envs/mdp.hpp"
#include "ors_lab/config.hpp"

namespace ors::lab {

enum ExitCode : int { kExitClean = 0, kExitViolation = 1, kExitPreconditions = 2, kExitError = 3 };

/// A later stage was asked for before the artifact of an earlier one exists.
class PrerequisiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Stage { occupancy, reward, policy, all };
enum class Which { prop1, prop2, theorem1, all };

Stage parse_stage(const std::string& name);
Which parse_which(const std::string& name);

struct Environment {
  envs::GridMaze maze;
  envs::DeterministicMdp mdp;
  int goal = 0;  ///< env.goal, else the layout's G cell, else the last state
};

Environment make_environment(const RunConfig& config);

/// Each command reads and writes under config.run.out and updates manifest.json there.
int cmd_gen_data(const RunConfig& config);
int cmd_train(const RunConfig& config, Stage stage);
int cmd_verify(const RunConfig& config, Which which, bool untrained = false);
int cmd_analyze(const RunConfig& config);
int cmd_eval(const RunConfig& config);

}  // namespace ors::lab
