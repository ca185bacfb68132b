#include "ors/envs/grid_maze.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ors/common/error.hpp"

namespace ors::envs {

GridMaze::GridMaze(int rows, int cols, std::vector<bool> walls, std::optional<int> goal_cell)
    : rows_(rows), cols_(cols), walls_(std::move(walls)), goal_cell_(goal_cell) {
  if (rows_ <= 0 || cols_ <= 0) throw std::invalid_argument("maze: empty layout");
  if (walls_.size() != static_cast<std::size_t>(rows_ * cols_)) throw ShapeError("maze: wall mask size mismatch");
  state_of_cell_.assign(walls_.size(), -1);
  for (int c = 0; c < rows_ * cols_; ++c) {
    if (walls_[static_cast<std::size_t>(c)]) continue;
    state_of_cell_[static_cast<std::size_t>(c)] = static_cast<int>(cell_of_state_.size());
    cell_of_state_.push_back(c);
  }
  if (cell_of_state_.empty()) throw std::invalid_argument("maze: no free cells");
  if (goal_cell_ && walls_[static_cast<std::size_t>(*goal_cell_)])
    throw std::invalid_argument("maze: goal marker on a wall");
}

GridMaze GridMaze::parse(std::string_view text) {
  std::vector<std::string> lines;
  std::vector<int> line_numbers;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == ';') continue;
    lines.push_back(line);
    line_numbers.push_back(number);
  }
  if (lines.empty()) throw ParseError("maze layout is empty", number > 0 ? number : 1);
  const int cols = static_cast<int>(lines.front().size());
  std::vector<bool> walls;
  std::optional<int> goal;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    if (static_cast<int>(lines[r].size()) != cols)
      throw ParseError("row has " + std::to_string(lines[r].size()) + " cells, expected " + std::to_string(cols),
                       line_numbers[r]);
    for (int c = 0; c < cols; ++c) {
      const char ch = lines[r][static_cast<std::size_t>(c)];
      switch (ch) {
        case '#':
          walls.push_back(true);
          break;
        case '.':
          walls.push_back(false);
          break;
        case 'G':
          if (goal) throw ParseError("more than one goal marker", line_numbers[r]);
          goal = static_cast<int>(r) * cols + c;
          walls.push_back(false);
          break;
        default:
          throw ParseError(std::string("unexpected character '") + ch + "'", line_numbers[r]);
      }
    }
  }
  try {
    return GridMaze(static_cast<int>(lines.size()), cols, std::move(walls), goal);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_numbers.front());
  }
}

GridMaze GridMaze::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open maze file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

GridMaze GridMaze::chain(int n) { return GridMaze(1, n, std::vector<bool>(static_cast<std::size_t>(n), false)); }

GridMaze GridMaze::open(int rows, int cols) {
  return GridMaze(rows, cols, std::vector<bool>(static_cast<std::size_t>(rows * cols), false));
}

GridMaze GridMaze::u_shape() {
  return parse(
      "...\n"
      ".#.\n"
      ".#.\n");
}

GridMaze GridMaze::maze8x8() {
  return parse(
      "........\n"
      ".##.###.\n"
      ".#.....#\n"
      ".#.##...\n"
      "...#...#\n"
      "##.#.#..\n"
      "...#.##.\n"
      ".#......\n");
}

bool GridMaze::is_wall(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return true;
  return walls_[static_cast<std::size_t>(r * cols_ + c)];
}

int GridMaze::state_of(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return -1;
  return state_of_cell_[static_cast<std::size_t>(r * cols_ + c)];
}

std::pair<int, int> GridMaze::cell_of(int s) const {
  const int cell = cell_of_state_.at(static_cast<std::size_t>(s));
  return {cell / cols_, cell % cols_};
}

std::optional<int> GridMaze::marked_goal() const {
  if (!goal_cell_) return std::nullopt;
  return state_of_cell_[static_cast<std::size_t>(*goal_cell_)];
}

DeterministicMdp GridMaze::to_mdp(double gamma) const {
  static constexpr int dr[kNumGridActions] = {-1, 1, 0, 0, 0};
  static constexpr int dc[kNumGridActions] = {0, 0, 1, -1, 0};
  const int n = num_free();
  std::vector<int> succ(static_cast<std::size_t>(n * kNumGridActions));
  Eigen::MatrixXd coords(2, n);
  for (int s = 0; s < n; ++s) {
    const auto [r, c] = cell_of(s);
    coords(0, s) = r;
    coords(1, s) = c;
    for (int a = 0; a < kNumGridActions; ++a) {
      const int nr = r + dr[a], nc = c + dc[a];
      succ[static_cast<std::size_t>(s * kNumGridActions + a)] = is_wall(nr, nc) ? s : state_of(nr, nc);
    }
  }
  DeterministicMdp mdp(n, kNumGridActions, std::move(succ), std::move(coords), gamma);
  return mdp;
}

std::string GridMaze::to_text() const {
  std::string out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      const int cell = r * cols_ + c;
      if (goal_cell_ && *goal_cell_ == cell)
        out += 'G';
      else
        out += walls_[static_cast<std::size_t>(cell)] ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

GridMaze grid_maze_from_name(const std::string& name) {
  if (name.rfind("chain:", 0) == 0) return GridMaze::chain(std::stoi(name.substr(6)));
  if (name.rfind("grid:", 0) == 0) {
    const auto spec = name.substr(5);
    const auto x = spec.find('x');
    if (x == std::string::npos) throw std::invalid_argument("grid spec must look like grid:RxC");
    return GridMaze::open(std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1)));
  }
  if (name == "u-maze") return GridMaze::u_shape();
  if (name == "maze8x8") return GridMaze::maze8x8();
  return GridMaze::load(name);
}

}  // namespace ors::envs
