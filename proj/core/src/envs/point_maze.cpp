#include "ors/envs/point_maze.hpp"

#include <algorithm>
#include <stdexcept>

#include "ors/common/parallel.hpp"

namespace ors::envs {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  return (p.x() - o.x()) * (q.y() - o.y()) - (p.y() - o.y()) * (q.x() - o.x());
}

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
  return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) && std::min(p.y(), q.y()) <= r.y() &&
         r.y() <= std::max(p.y(), q.y());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                        const Eigen::Vector2d& q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

PointMaze2d::PointMaze2d(std::vector<WallSegment> walls, double step, double goal_radius, double action_noise)
    : walls_(std::move(walls)), step_(step), goal_radius_(goal_radius), action_noise_(action_noise) {
  if (step <= 0.0 || goal_radius <= 0.0 || action_noise < 0.0)
    throw std::invalid_argument("point maze needs positive step and goal radius, non-negative noise");
}

PointMaze2d PointMaze2d::open() { return PointMaze2d({}); }

PointMaze2d PointMaze2d::wall() { return PointMaze2d({{{0.5, 0.0}, {0.5, 0.7}}}); }

PointMaze2d PointMaze2d::from_name(const std::string& name) {
  if (name == "point-open") return open();
  if (name == "point-wall") return wall();
  throw std::invalid_argument("unknown point maze '" + name + "' (expected point-open or point-wall)");
}

Eigen::Vector2d PointMaze2d::step(const Eigen::Vector2d& s, const Eigen::Vector2d& a, Rng& rng) const {
  Eigen::Vector2d move = a.cwiseMax(-1.0).cwiseMin(1.0) * step_;
  if (action_noise_ > 0.0) move += step_ * action_noise_ * Eigen::Vector2d(rng.normal(), rng.normal());
  const Eigen::Vector2d next = (s + move).cwiseMax(0.0).cwiseMin(1.0);
  return crosses_wall(s, next) ? s : next;
}

bool PointMaze2d::crosses_wall(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const {
  return std::any_of(walls_.begin(), walls_.end(),
                     [&](const WallSegment& w) { return segments_intersect(p, q, w.from, w.to); });
}

Eigen::Vector2d PointMaze2d::sample_state(Rng& rng) const { return {rng.uniform(), rng.uniform()}; }

EmbeddedDataset generate_point_dataset(const PointMaze2d& env, const PolicySpec& spec, int n_trajectories,
                                       int horizon, const Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (spec.kind == PolicySpec::Kind::layer_monotone)
    throw std::invalid_argument("layer-monotone policy is only defined for discrete mazes");

  const auto steps = static_cast<std::size_t>(horizon) + 1;
  std::vector<Eigen::MatrixXd> xs(static_cast<std::size_t>(n_trajectories));
  std::vector<Eigen::MatrixXd> us(static_cast<std::size_t>(n_trajectories));
  parallel_for(static_cast<std::size_t>(n_trajectories), [&](std::size_t i) {
    Rng local = rng.split(static_cast<std::uint64_t>(i));
    Eigen::MatrixXd& x = xs[i];
    Eigen::MatrixXd& u = us[i];
    x.resize(2, static_cast<Eigen::Index>(steps));
    u.resize(2, static_cast<Eigen::Index>(steps));
    Eigen::Vector2d s = env.sample_state(local);
    Eigen::Vector2d goal = env.sample_state(local);
    for (std::size_t t = 0; t < steps; ++t) {
      Eigen::Vector2d a(local.uniform(-1.0, 1.0), local.uniform(-1.0, 1.0));
      if (spec.kind == PolicySpec::Kind::epsilon_greedy_random_goals) {
        if (env.reached(s, goal)) goal = env.sample_state(local);
        if (!local.bernoulli(spec.epsilon)) {
          const Eigen::Vector2d d = goal - s;
          a = d / std::max(d.cwiseAbs().maxCoeff(), 1e-12);
        }
      }
      x.col(static_cast<Eigen::Index>(t)) = s;
      u.col(static_cast<Eigen::Index>(t)) = a;
      s = env.step(s, a, local);
    }
  });

  EmbeddedDataset out;
  const auto total = static_cast<Eigen::Index>(n_trajectories) * horizon;
  out.s.resize(2, total);
  out.a.resize(2, total);
  out.s_next.resize(2, total);
  out.a_next.resize(2, total);
  Eigen::Index c = 0;
  for (int i = 0; i < n_trajectories; ++i) {
    const auto& x = xs[static_cast<std::size_t>(i)];
    const auto& u = us[static_cast<std::size_t>(i)];
    for (int t = 0; t < horizon; ++t, ++c) {
      out.s.col(c) = x.col(t);
      out.a.col(c) = u.col(t);
      out.s_next.col(c) = x.col(t + 1);
      out.a_next.col(c) = u.col(t + 1);
      out.traj_id.push_back(i);
      out.t.push_back(t);
    }
    out.offsets.push_back(static_cast<std::size_t>(c));
  }
  return out;
}

}  // namespace ors::envs
