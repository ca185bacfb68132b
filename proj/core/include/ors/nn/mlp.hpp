#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ors/common/rng.hpp"

namespace ors::nn {

enum class Activation { identity, gelu };

struct LayerSpec {
  int in = 0;
  int out = 0;
  Activation activation = Activation::identity;
  bool layer_norm = false;  ///< normalize the affine output before the activation
};

/// Per-batch intermediates kept by `forward` so `backward` can skip the recompute.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;       ///< input of each layer
  std::vector<Eigen::MatrixXd> normalized;   ///< layer-norm output before gain/shift
  std::vector<Eigen::RowVectorXd> inv_std;   ///< layer-norm 1/sqrt(var + eps) per column
  std::vector<Eigen::MatrixXd> preactivation;
};

struct MlpGradients {
  Eigen::VectorXd params;  ///< same layout as Mlp::params(), summed over the batch
  Eigen::MatrixXd input;   ///< d(seeded output)/d(input), one column per sample
};

/// Dense multilayer perceptron with exact-GELU hidden activations and
/// optional layer normalization. All parameters live in one flat vector so
/// optimizers and target copies can treat the network as a single array.
///
/// Column convention: a batch is a matrix with one sample per column.
class Mlp {
 public:
  static constexpr double kLayerNormEps = 1e-5;

  Mlp() = default;
  /// Zero-initialized network. Layer norm gains start at 1.
  explicit Mlp(std::vector<LayerSpec> layers);

  /// widths = {input, hidden..., output}. Hidden layers use GELU (and layer
  /// norm when requested); the output layer is linear. Weights are drawn
  /// uniformly in +-sqrt(6 / (fan_in + fan_out)), biases start at zero.
  static Mlp build(std::span<const int> widths, bool layer_norm, Rng& rng);

  int input_dim() const;
  int output_dim() const;
  std::vector<int> widths() const;
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  std::size_t num_params() const noexcept { return static_cast<std::size_t>(params_.size()); }

  Eigen::VectorXd& params() noexcept { return params_; }
  const Eigen::VectorXd& params() const noexcept { return params_; }

  Eigen::Map<Eigen::MatrixXd> weight(int layer);
  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<Eigen::VectorXd> bias(int layer);
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  Eigen::Map<Eigen::VectorXd> ln_gain(int layer);
  Eigen::Map<Eigen::VectorXd> ln_shift(int layer);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, ForwardCache* cache = nullptr) const;

  /// Gradient of sum_j <output_grad_j, f(x_j)> with respect to the parameters
  /// and the inputs.
  MlpGradients backward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& output_grad) const;
  MlpGradients backward(const ForwardCache& cache, const Eigen::MatrixXd& output_grad) const;

  bool same_shape(const Mlp& other) const;

 private:
  struct Offsets {
    Eigen::Index weight, bias, gain, shift;
  };

  std::vector<LayerSpec> layers_;
  std::vector<Offsets> offsets_;
  Eigen::VectorXd params_;
};

double gelu(double x);
double gelu_derivative(double x);

}  // namespace ors::nn
