#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ors/envs/mdp.hpp"

namespace ors::envs {

/// Maze action ids. Moving into a wall or off the grid leaves the agent in place.
enum GridAction : int { kUp = 0, kDown = 1, kRight = 2, kLeft = 3, kStay = 4 };
inline constexpr int kNumGridActions = 5;

/// Rectangular grid of free cells and walls.
///
/// Text layout: one row per line, `#` wall, `.` free, `G` free cell marked as
/// the goal. Blank lines and lines starting with `;` are ignored.
class GridMaze {
 public:
  GridMaze(int rows, int cols, std::vector<bool> walls, std::optional<int> goal_cell = std::nullopt);

  static GridMaze parse(std::string_view text);
  static GridMaze load(const std::filesystem::path& path);

  /// 1 x n corridor.
  static GridMaze chain(int n);
  /// rows x cols grid without interior walls.
  static GridMaze open(int rows, int cols);
  /// Corridor bent around a wall so that Euclidean and path distances disagree.
  static GridMaze u_shape();
  /// Fixed 8x8 maze used by the end-to-end experiments.
  static GridMaze maze8x8();

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool is_wall(int r, int c) const;
  int num_free() const noexcept { return static_cast<int>(cell_of_state_.size()); }
  /// State index of the free cell at (r, c), or -1.
  int state_of(int r, int c) const;
  std::pair<int, int> cell_of(int s) const;
  /// Goal marked with `G` in the layout, as a state index.
  std::optional<int> marked_goal() const;

  /// States are free cells in row-major order, embedded at (row, col).
  DeterministicMdp to_mdp(double gamma) const;

  std::string to_text() const;

 private:
  int rows_;
  int cols_;
  std::vector<bool> walls_;
  std::optional<int> goal_cell_;
  std::vector<int> cell_of_state_;
  std::vector<int> state_of_cell_;
};

/// Resolves "chain:N", "grid:RxC", "u-maze", "maze8x8" or a path to a layout file.
GridMaze grid_maze_from_name(const std::string& name);

}  // namespace ors::envs
