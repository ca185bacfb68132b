#include "ors/nn/mlp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ors/common/error.hpp"

namespace ors::nn {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

Mlp::Mlp(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("Mlp: at least one layer required");
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.in <= 0 || l.out <= 0) throw ShapeError("Mlp: layer widths must be positive");
    if (i > 0 && layers_[i - 1].out != l.in)
      throw ShapeError("Mlp: layer " + std::to_string(i) + " input width " + std::to_string(l.in) +
                       " does not match previous output width " + std::to_string(layers_[i - 1].out));
    Offsets o{};
    o.weight = offset;
    offset += static_cast<Eigen::Index>(l.in) * l.out;
    o.bias = offset;
    offset += l.out;
    o.gain = o.shift = -1;
    if (l.layer_norm) {
      o.gain = offset;
      offset += l.out;
      o.shift = offset;
      offset += l.out;
    }
    offsets_.push_back(o);
  }
  params_ = Eigen::VectorXd::Zero(offset);
  for (std::size_t i = 0; i < layers_.size(); ++i)
    if (layers_[i].layer_norm) ln_gain(static_cast<int>(i)).setOnes();
}

Mlp Mlp::build(std::span<const int> widths, bool layer_norm, Rng& rng) {
  if (widths.size() < 2) throw ShapeError("Mlp::build: need at least input and output widths");
  std::vector<LayerSpec> specs;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const bool hidden = i + 2 < widths.size();
    specs.push_back({widths[i], widths[i + 1], hidden ? Activation::gelu : Activation::identity,
                     hidden && layer_norm});
  }
  Mlp net(std::move(specs));
  for (int i = 0; i < static_cast<int>(net.layers_.size()); ++i) {
    const auto& l = net.layers_[static_cast<std::size_t>(i)];
    const double limit = std::sqrt(6.0 / (l.in + l.out));
    auto w = net.weight(i);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-limit, limit);
  }
  return net;
}

int Mlp::input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
int Mlp::output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }

std::vector<int> Mlp::widths() const {
  std::vector<int> w;
  if (layers_.empty()) return w;
  w.push_back(layers_.front().in);
  for (const auto& l : layers_) w.push_back(l.out);
  return w;
}

Eigen::Map<Eigen::MatrixXd> Mlp::weight(int i) {
  const auto& l = layers_.at(static_cast<std::size_t>(i));
  return {params_.data() + offsets_[static_cast<std::size_t>(i)].weight, l.out, l.in};
}
Eigen::Map<const Eigen::MatrixXd> Mlp::weight(int i) const {
  const auto& l = layers_.at(static_cast<std::size_t>(i));
  return {params_.data() + offsets_[static_cast<std::size_t>(i)].weight, l.out, l.in};
}
Eigen::Map<Eigen::VectorXd> Mlp::bias(int i) {
  return {params_.data() + offsets_.at(static_cast<std::size_t>(i)).bias, layers_[static_cast<std::size_t>(i)].out};
}
Eigen::Map<const Eigen::VectorXd> Mlp::bias(int i) const {
  return {params_.data() + offsets_.at(static_cast<std::size_t>(i)).bias, layers_[static_cast<std::size_t>(i)].out};
}
Eigen::Map<Eigen::VectorXd> Mlp::ln_gain(int i) {
  const auto& o = offsets_.at(static_cast<std::size_t>(i));
  if (o.gain < 0) throw ShapeError("Mlp: layer has no layer norm");
  return {params_.data() + o.gain, layers_[static_cast<std::size_t>(i)].out};
}
Eigen::Map<Eigen::VectorXd> Mlp::ln_shift(int i) {
  const auto& o = offsets_.at(static_cast<std::size_t>(i));
  if (o.shift < 0) throw ShapeError("Mlp: layer has no layer norm");
  return {params_.data() + o.shift, layers_[static_cast<std::size_t>(i)].out};
}

bool Mlp::same_shape(const Mlp& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto &a = layers_[i], &b = other.layers_[i];
    if (a.in != b.in || a.out != b.out || a.activation != b.activation || a.layer_norm != b.layer_norm)
      return false;
  }
  return true;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out = forward_batch(x);
  return out.col(0);
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& x, ForwardCache* cache) const {
  if (layers_.empty()) throw ShapeError("Mlp: empty network");
  if (x.rows() != input_dim())
    throw ShapeError("Mlp::forward: input has " + std::to_string(x.rows()) + " rows, expected " +
                     std::to_string(input_dim()));
  if (cache) {
    cache->inputs.assign(layers_.size(), {});
    cache->normalized.assign(layers_.size(), {});
    cache->inv_std.assign(layers_.size(), {});
    cache->preactivation.assign(layers_.size(), {});
  }
  Eigen::MatrixXd h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const int li = static_cast<int>(i);
    Eigen::MatrixXd z = weight(li) * h;
    z.colwise() += bias(li);
    if (cache) cache->inputs[i] = std::move(h);
    if (l.layer_norm) {
      const Eigen::RowVectorXd mean = z.colwise().mean();
      z.rowwise() -= mean;
      const Eigen::RowVectorXd var = z.array().square().colwise().mean();
      const Eigen::RowVectorXd inv = (var.array() + kLayerNormEps).rsqrt();
      z = z * inv.asDiagonal();
      if (cache) {
        cache->normalized[i] = z;
        cache->inv_std[i] = inv;
      }
      const auto& o = offsets_[i];
      Eigen::Map<const Eigen::VectorXd> gain(params_.data() + o.gain, l.out);
      Eigen::Map<const Eigen::VectorXd> shift(params_.data() + o.shift, l.out);
      z = gain.asDiagonal() * z;
      z.colwise() += shift;
    }
    if (l.activation == Activation::gelu) {
      if (cache) cache->preactivation[i] = z;
      h = z.unaryExpr([](double v) { return gelu(v); });
    } else {
      h = std::move(z);
    }
  }
  return h;
}

MlpGradients Mlp::backward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& output_grad) const {
  ForwardCache cache;
  forward_batch(x, &cache);
  return backward(cache, output_grad);
}

MlpGradients Mlp::backward(const ForwardCache& cache, const Eigen::MatrixXd& output_grad) const {
  if (cache.inputs.size() != layers_.size()) throw ShapeError("Mlp::backward: cache does not match network");
  const Eigen::Index batch = cache.inputs.front().cols();
  if (output_grad.rows() != output_dim() || output_grad.cols() != batch)
    throw ShapeError("Mlp::backward: output gradient is " + std::to_string(output_grad.rows()) + "x" +
                     std::to_string(output_grad.cols()) + ", expected " + std::to_string(output_dim()) + "x" +
                     std::to_string(batch));
  MlpGradients g;
  g.params = Eigen::VectorXd::Zero(params_.size());
  Eigen::MatrixXd delta = output_grad;
  for (std::size_t r = layers_.size(); r-- > 0;) {
    const auto& l = layers_[r];
    const auto& o = offsets_[r];
    const int li = static_cast<int>(r);
    if (l.activation == Activation::gelu)
      delta.array() *= cache.preactivation[r].unaryExpr([](double v) { return gelu_derivative(v); }).array();
    if (l.layer_norm) {
      const Eigen::MatrixXd& xhat = cache.normalized[r];
      Eigen::Map<Eigen::VectorXd>(g.params.data() + o.gain, l.out) = (delta.array() * xhat.array()).rowwise().sum();
      Eigen::Map<Eigen::VectorXd>(g.params.data() + o.shift, l.out) = delta.rowwise().sum();
      Eigen::Map<const Eigen::VectorXd> gain(params_.data() + o.gain, l.out);
      const Eigen::MatrixXd dxhat = gain.asDiagonal() * delta;
      const Eigen::RowVectorXd mean_d = dxhat.colwise().mean();
      const Eigen::RowVectorXd mean_dx = (dxhat.array() * xhat.array()).colwise().mean();
      Eigen::MatrixXd dz = dxhat;
      dz.rowwise() -= mean_d;
      dz -= xhat * mean_dx.asDiagonal();
      delta = dz * cache.inv_std[r].asDiagonal();
    }
    Eigen::Map<Eigen::MatrixXd>(g.params.data() + o.weight, l.out, l.in) = delta * cache.inputs[r].transpose();
    Eigen::Map<Eigen::VectorXd>(g.params.data() + o.bias, l.out) = delta.rowwise().sum();
    delta = weight(li).transpose() * delta;
  }
  g.input = std::move(delta);
  return g;
}

}  // namespace ors::nn
