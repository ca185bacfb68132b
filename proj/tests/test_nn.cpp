#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "ors/common/error.hpp"
#include "ors/nn/adam.hpp"
#include "ors/nn/checkpoint.hpp"
#include "ors/nn/mlp.hpp"
#include "ors/nn/target_copy.hpp"
#include "support/oracles.hpp"

using namespace ors;
using nn::Activation;
using nn::LayerSpec;
using nn::Mlp;

TEST(Mlp, IdentityLayerPassesInputThrough) {
  Mlp net({LayerSpec{2, 2, Activation::identity, false}});
  net.weight(0).setIdentity();
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  EXPECT_EQ(net.forward(x), x);
}

TEST(Mlp, ZeroNetworkReturnsZero) {
  Mlp net({LayerSpec{3, 4, Activation::identity, false}, LayerSpec{4, 2, Activation::identity, false}});
  Rng rng(1);
  const Eigen::VectorXd y = net.forward(rng.normal_matrix(3, 1).col(0));
  EXPECT_EQ(y, Eigen::VectorXd::Zero(2));
}

TEST(Mlp, HandComputedTwoLayerForward) {
  // h = gelu(2 * 0.5 + 0.1) = 1.1 * Phi(1.1),  y = -3 h + 0.5
  Mlp net({LayerSpec{1, 1, Activation::gelu, false}, LayerSpec{1, 1, Activation::identity, false}});
  net.weight(0)(0, 0) = 2.0;
  net.bias(0)(0) = 0.1;
  net.weight(1)(0, 0) = -3.0;
  net.bias(1)(0) = 0.5;
  const double phi_11 = 0.8643339390536173;
  const double expected = -3.0 * 1.1 * phi_11 + 0.5;
  EXPECT_NEAR(net.forward(Eigen::VectorXd::Constant(1, 0.5))(0), expected, 1e-14);
  EXPECT_NEAR(expected, -2.352301998876937, 1e-12);
}

TEST(Mlp, RejectsWrongInputWidth) {
  Mlp net({LayerSpec{3, 2, Activation::identity, false}});
  EXPECT_THROW(net.forward(Eigen::VectorXd::Zero(2)), ShapeError);
  EXPECT_THROW(Mlp({LayerSpec{3, 2, Activation::identity, false}, LayerSpec{3, 1, Activation::identity, false}}),
               ShapeError);
}

TEST(Mlp, BackwardRejectsMismatchedOutputGradient) {
  Rng rng(2);
  const std::vector<int> widths{3, 4, 2};
  const Mlp net = Mlp::build(widths, false, rng);
  EXPECT_THROW(net.backward(Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2)), ShapeError);
}

TEST(Mlp, ZeroOutputGradientGivesZeroGradients) {
  Rng rng(3);
  const std::vector<int> widths{3, 5, 2};
  const Mlp net = Mlp::build(widths, true, rng);
  const auto g = net.backward(rng.normal_matrix(3, 4), Eigen::MatrixXd::Zero(2, 4));
  EXPECT_EQ(g.params.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.input.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mlp, LinearScalarGradientIsTheInput) {
  Mlp net({LayerSpec{1, 1, Activation::identity, false}});
  net.weight(0)(0, 0) = 0.7;
  const auto g = net.backward(Eigen::MatrixXd::Constant(1, 1, 3.0), Eigen::MatrixXd::Constant(1, 1, 1.0));
  EXPECT_DOUBLE_EQ(g.params(0), 3.0);  // d(wx)/dw
  EXPECT_DOUBLE_EQ(g.params(1), 1.0);  // d(wx + b)/db
  EXPECT_DOUBLE_EQ(g.input(0, 0), 0.7);
}

TEST(Mlp, GeluDerivativeMatchesFiniteDifference) {
  for (double x : {-3.0, -1.0, -0.2, 0.0, 0.4, 1.7, 4.0}) {
    const double fd = (nn::gelu(x + 1e-5) - nn::gelu(x - 1e-5)) / 2e-5;
    EXPECT_NEAR(nn::gelu_derivative(x), fd, 1e-9) << x;
  }
  EXPECT_DOUBLE_EQ(nn::gelu(0.0), 0.0);
}

struct GradConfig {
  std::vector<int> widths;
  bool layer_norm;
};

class MlpGradient : public ::testing::TestWithParam<GradConfig> {};

TEST_P(MlpGradient, MatchesCentralDifferencesOn16Probes) {
  const auto& cfg = GetParam();
  Rng rng(17);
  for (int probe = 0; probe < 16; ++probe) {
    Mlp net = Mlp::build(cfg.widths, cfg.layer_norm, rng);
    if (cfg.layer_norm)
      for (std::size_t i = 0; i + 1 < net.layers().size(); ++i) {
        net.ln_gain(static_cast<int>(i)) += 0.3 * rng.normal_matrix(net.layers()[i].out, 1).col(0);
        net.ln_shift(static_cast<int>(i)) = 0.2 * rng.normal_matrix(net.layers()[i].out, 1).col(0);
      }
    const Eigen::MatrixXd x = rng.normal_matrix(cfg.widths.front(), 3);
    const Eigen::MatrixXd w = rng.normal_matrix(cfg.widths.back(), 3);
    const auto analytic = net.backward(x, w);

    auto loss_params = [&](const Eigen::VectorXd& p) {
      Mlp copy = net;
      copy.params() = p;
      return (copy.forward_batch(x).array() * w.array()).sum();
    };
    const Eigen::VectorXd fd = ors::testing::richardson_difference(loss_params, net.params());
    EXPECT_LT(ors::testing::max_relative_error(analytic.params, fd), 1e-5) << "probe " << probe;

    auto loss_input = [&](const Eigen::VectorXd& flat) {
      const Eigen::MatrixXd xi = Eigen::Map<const Eigen::MatrixXd>(flat.data(), x.rows(), x.cols());
      return (net.forward_batch(xi).array() * w.array()).sum();
    };
    const Eigen::VectorXd fd_in =
        ors::testing::richardson_difference(loss_input, Eigen::Map<const Eigen::VectorXd>(x.data(), x.size()));
    const Eigen::VectorXd an_in = Eigen::Map<const Eigen::VectorXd>(analytic.input.data(), analytic.input.size());
    EXPECT_LT(ors::testing::max_relative_error(an_in, fd_in), 1e-5) << "probe " << probe;
  }
}

INSTANTIATE_TEST_SUITE_P(Configurations, MlpGradient,
                         ::testing::Values(GradConfig{{3, 5, 2}, false}, GradConfig{{3, 5, 2}, true},
                                           GradConfig{{4, 6, 6, 3}, false}, GradConfig{{4, 6, 6, 3}, true},
                                           GradConfig{{7, 8, 8, 8, 2}, true}, GradConfig{{6, 8, 8, 1}, true}));

TEST(Mlp, BatchForwardMatchesColumnwiseForward) {
  Rng rng(5);
  const std::vector<int> widths{3, 6, 2};
  const Mlp net = Mlp::build(widths, true, rng);
  const Eigen::MatrixXd x = rng.normal_matrix(3, 5);
  const Eigen::MatrixXd y = net.forward_batch(x);
  for (int j = 0; j < 5; ++j) EXPECT_LT((y.col(j) - net.forward(x.col(j))).norm(), 1e-14);
}

namespace {

struct ScalarAdam {
  double m = 0, v = 0;
  long t = 0;
  double step(double p, double g, double lr, double b1 = 0.9, double b2 = 0.999, double eps = 1e-8) {
    ++t;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, static_cast<double>(t)));
    const double vh = v / (1 - std::pow(b2, static_cast<double>(t)));
    return p - lr * mh / (std::sqrt(vh) + eps);
  }
};

}  // namespace

TEST(Adam, ZeroGradientLeavesParamsAndCountsStep) {
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(4, -1, 1);
  const Eigen::VectorXd before = p;
  auto st = nn::AdamState::zeros(4, 1e-3);
  nn::adam_step(p, Eigen::VectorXd::Zero(4), st);
  EXPECT_EQ(p, before);
  EXPECT_EQ(st.step, 1);
}

TEST(Adam, MatchesScalarReference) {
  Rng rng(9);
  Eigen::VectorXd p = rng.normal_matrix(3, 1).col(0);
  auto st = nn::AdamState::zeros(3, 3e-4);
  std::vector<ScalarAdam> ref(3);
  std::vector<double> rp(p.data(), p.data() + 3);
  for (int k = 0; k < 25; ++k) {
    const Eigen::VectorXd g = rng.normal_matrix(3, 1).col(0);
    nn::adam_step(p, g, st);
    for (int i = 0; i < 3; ++i) rp[i] = ref[i].step(rp[i], g(i), 3e-4);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(p(i), rp[i], 1e-15);
  }
  // first step moves by lr in the direction opposite to the gradient sign
  Eigen::VectorXd q = Eigen::VectorXd::Zero(1);
  auto s2 = nn::AdamState::zeros(1, 0.01);
  nn::adam_step(q, Eigen::VectorXd::Constant(1, 5.0), s2);
  EXPECT_NEAR(q(0), -0.01, 1e-10);
}

TEST(Adam, RepeatedGradientMovesMonotonically) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
  auto st = nn::AdamState::zeros(1, 0.01);
  double prev = 0.0;
  for (int k = 0; k < 50; ++k) {
    nn::adam_step(p, Eigen::VectorXd::Constant(1, -2.0), st);
    EXPECT_GT(p(0), prev);
    prev = p(0);
  }
}

TEST(Adam, RejectsNonFiniteGradientWithoutTouchingState) {
  Eigen::VectorXd p = Eigen::VectorXd::Ones(2);
  auto st = nn::AdamState::zeros(2);
  Eigen::VectorXd g(2);
  g << 1.0, std::nan("");
  EXPECT_THROW(nn::adam_step(p, g, st), NumericError);
  EXPECT_EQ(p, Eigen::VectorXd::Ones(2));
  EXPECT_EQ(st.step, 0);
  EXPECT_THROW(nn::adam_step(p, Eigen::VectorXd::Ones(3), st), ShapeError);
}

TEST(TargetCopy, RateOneCopiesBitwise) {
  Rng rng(4);
  const std::vector<int> widths{3, 4, 2};
  const Mlp a = Mlp::build(widths, true, rng);
  auto t = nn::TargetCopy::of(Mlp::build(widths, true, rng), 0.005);
  nn::polyak_update(t, a, 1.0);
  EXPECT_EQ(t.shadow.params(), a.params());
}

TEST(TargetCopy, ArithmeticAndGeometricResidual) {
  Mlp zero({LayerSpec{1, 1, Activation::identity, false}});
  Mlp one = zero;
  one.params().setOnes();
  auto t = nn::TargetCopy::of(zero, 0.005);
  nn::polyak_update(t, one);
  EXPECT_NEAR(t.shadow.params()(0), 0.005, 1e-15);
  for (int n = 2; n <= 400; ++n) {
    nn::polyak_update(t, one);
    EXPECT_NEAR(1.0 - t.shadow.params()(0), std::pow(1.0 - 0.005, n), 1e-12);
  }
}

TEST(TargetCopy, RejectsBadRateAndShape) {
  Mlp a({LayerSpec{1, 1, Activation::identity, false}});
  Mlp b({LayerSpec{2, 1, Activation::identity, false}});
  auto t = nn::TargetCopy::of(a, 0.5);
  EXPECT_THROW(nn::polyak_update(t, a, 0.0), std::invalid_argument);
  EXPECT_THROW(nn::polyak_update(t, a, 1.5), std::invalid_argument);
  EXPECT_THROW(nn::polyak_update(t, b, 0.5), ShapeError);
}

TEST(Training, SameSeedGivesBitwiseIdenticalParameters) {
  auto run = [] {
    Rng rng(11);
    const std::vector<int> widths{2, 8, 1};
    Mlp net = Mlp::build(widths, true, rng);
    auto st = nn::AdamState::zeros(static_cast<Eigen::Index>(net.num_params()), 1e-2);
    for (int k = 0; k < 30; ++k) {
      const Eigen::MatrixXd x = rng.normal_matrix(2, 8);
      const Eigen::MatrixXd y = net.forward_batch(x) - x.row(0);
      nn::adam_step(net.params(), net.backward(x, 2.0 * y).params, st);
    }
    return net.params();
  };
  EXPECT_EQ(run(), run());
}

TEST(Checkpoint, RoundTripsNetworkAndAdam) {
  Rng rng(6);
  const std::vector<int> widths{3, 4, 2};
  const Mlp net = Mlp::build(widths, true, rng);
  auto st = nn::AdamState::zeros(static_cast<Eigen::Index>(net.num_params()), 1e-3);
  Eigen::VectorXd p = net.params();
  nn::adam_step(p, Eigen::VectorXd::Ones(p.size()), st);
  const auto doc = nn::mlp_to_json(net, &st);
  EXPECT_EQ(doc.at("format_version").get<int>(), nn::kCheckpointFormatVersion);
  const auto path = std::filesystem::temp_directory_path() / "ors_nn_checkpoint.json";
  nn::write_json(path, doc);
  const auto back = nn::read_json(path);
  const Mlp loaded = nn::mlp_from_json(back);
  EXPECT_EQ(loaded.params(), net.params());
  EXPECT_EQ(loaded.widths(), net.widths());
  const auto adam = nn::adam_from_json(back);
  ASSERT_TRUE(adam.has_value());
  EXPECT_EQ(adam->step, 1);
  EXPECT_EQ(adam->m, st.m);
  std::filesystem::remove(path);
}
