#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace ors {

/// Seeded random stream. Sub-streams derived with `split` are independent of
/// the parent's consumption state, so stages stay reproducible in isolation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child stream keyed by a name ("dataset", "occupancy", ...).
  Rng split(std::string_view name) const;
  /// Child stream keyed by an integer (per-trajectory, per-episode streams).
  Rng split(std::uint64_t index) const;

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  /// Uniform integer in [0, n).
  int uniform_int(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  /// Number of trials up to and including the first success, support {1, 2, ...}.
  long geometric(double success_prob) {
    return std::geometric_distribution<long>(success_prob)(engine_) + 1;
  }
  bool bernoulli(double p) { return uniform() < p; }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);
  Eigen::VectorXd uniform_vector(Eigen::Index n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to derive child seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace ors
