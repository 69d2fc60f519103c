#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "dem/checkpoint.hpp"
#include "dem/mlp.hpp"
#include "testutil.hpp"

using namespace dem;

TEST_CASE("parameter count matches shape arithmetic") {
  nn::MlpConfig cfg;
  cfg.input_dim = 1;
  cfg.output_dim = 1;
  cfg.hidden = {5, 5};
  // 5 + 25 + 5 weights, 5 + 5 + 1 biases
  CHECK(nn::param_count(cfg) == 46);
  CHECK(nn::init_params(cfg).count() == 46);
}

TEST_CASE("same seed gives identical parameters, different seed does not") {
  nn::MlpConfig cfg;
  cfg.input_dim = 2;
  cfg.output_dim = 2;
  cfg.hidden = {7};
  cfg.seed = 123;
  const Eigen::VectorXd a = nn::flatten(nn::init_params(cfg));
  const Eigen::VectorXd b = nn::flatten(nn::init_params(cfg));
  CHECK(a == b);
  cfg.seed = 124;
  const Eigen::VectorXd c = nn::flatten(nn::init_params(cfg));
  CHECK(a != c);
}

TEST_CASE("biases start at zero and weights within the Glorot bound") {
  nn::MlpConfig cfg;
  cfg.input_dim = 3;
  cfg.output_dim = 2;
  cfg.hidden = {4, 6};
  cfg.seed = 9;
  const nn::MlpParams p = nn::init_params(cfg);
  for (const auto& b : p.biases) CHECK(b.isZero(0.0));
  const auto sizes = cfg.layer_sizes();
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const double limit = std::sqrt(6.0 / (sizes[l] + sizes[l + 1]));
    CHECK(p.weights[l].cwiseAbs().maxCoeff() <= limit);
  }
}

TEST_CASE("invalid width is a configuration error") {
  nn::MlpConfig cfg;
  cfg.hidden = {0};
  CHECK_THROWS_AS(nn::init_params(cfg), std::invalid_argument);
}

TEST_CASE("zero network maps everything to zero with zero tangents") {
  nn::MlpConfig cfg;
  cfg.input_dim = 2;
  cfg.output_dim = 2;
  cfg.hidden = {4};
  nn::MlpParams p = nn::init_params(cfg);
  for (auto& w : p.weights) w.setZero();
  auto refs = nn::make_param_refs(p);
  std::array<double, 2> coords{0.3, -0.7};
  auto x = ad::dual_lift<double, 2>(coords, 1.0, 0.0);
  auto out = nn::mlp_forward<double, double, 2>(refs, cfg.activation,
                                                std::span(x.data(), 2));
  for (const auto& o : out) {
    CHECK(o.v == 0.0);
    CHECK(o.d[0] == 0.0);
    CHECK(o.d[1] == 0.0);
  }
}

TEST_CASE("single-unit identity chain evaluates tanh(x)") {
  nn::MlpConfig cfg;
  cfg.input_dim = 1;
  cfg.output_dim = 1;
  cfg.hidden = {1};
  nn::MlpParams p = nn::init_params(cfg);
  p.weights[0](0, 0) = 1.0;
  p.weights[1](0, 0) = 1.0;
  auto refs = nn::make_param_refs(p);
  std::array<double, 1> coords{0.5};
  auto x = ad::dual_lift<double, 1>(coords, 1.0, 0.0);
  auto out = nn::mlp_forward<double, double, 1>(refs, cfg.activation,
                                                std::span(x.data(), 1));
  CHECK(out[0].v == doctest::Approx(0.462117).epsilon(1e-5));
}

TEST_CASE("final layer is affine: doubling its weights doubles the output") {
  nn::MlpConfig cfg;
  cfg.input_dim = 1;
  cfg.output_dim = 1;
  cfg.hidden = {6, 6};
  cfg.seed = 3;
  nn::MlpParams p = nn::init_params(cfg);
  auto eval = [&](const nn::MlpParams& q) {
    auto refs = nn::make_param_refs(q);
    std::array<double, 1> coords{0.37};
    auto x = ad::dual_lift<double, 1>(coords, 1.0, 0.0);
    return nn::mlp_forward<double, double, 1>(refs, cfg.activation,
                                              std::span(x.data(), 1))[0]
        .v;
  };
  const double base = eval(p);
  p.weights.back() *= 2.0;
  CHECK(eval(p) == doctest::Approx(2.0 * base).epsilon(1e-14));
}

TEST_CASE("flatten/unflatten round-trips") {
  nn::MlpConfig cfg;
  cfg.input_dim = 2;
  cfg.output_dim = 3;
  cfg.hidden = {5, 4};
  cfg.seed = 77;
  const nn::MlpParams p = nn::init_params(cfg);
  const Eigen::VectorXd flat = nn::flatten(p);
  nn::MlpParams q = nn::init_params(cfg);
  nn::unflatten(flat, q);
  CHECK(nn::flatten(q) == flat);
}

TEST_CASE("checkpoint round-trips configs and parameters") {
  nn::MlpConfig cfg;
  cfg.input_dim = 2;
  cfg.output_dim = 2;
  cfg.hidden = {4, 3};
  cfg.activation = nn::Activation::TanhSq;
  cfg.seed = 11;
  const nn::MlpParams p = nn::init_params(cfg);
  const std::string path = "/tmp/dem_test_checkpoint.json";
  io::save_checkpoint(path, {cfg}, {p});
  const io::Checkpoint ck = io::load_checkpoint(path);
  REQUIRE(ck.configs.size() == 1);
  CHECK(ck.configs[0].hidden == cfg.hidden);
  CHECK(ck.configs[0].activation == cfg.activation);
  CHECK(nn::flatten(ck.params[0]) == nn::flatten(p));
  std::remove(path.c_str());
}

TEST_CASE("output tangent equals finite-difference slope") {
  nn::MlpConfig cfg;
  cfg.input_dim = 1;
  cfg.output_dim = 1;
  cfg.hidden = {8};
  cfg.activation = nn::Activation::EluSq;
  cfg.seed = 21;
  const nn::MlpParams p = nn::init_params(cfg);
  auto refs = nn::make_param_refs(p);
  auto eval = [&](double xv) {
    std::array<double, 1> coords{xv};
    auto x = ad::dual_lift<double, 1>(coords, 1.0, 0.0);
    return nn::mlp_forward<double, double, 1>(refs, cfg.activation,
                                              std::span(x.data(), 1))[0];
  };
  const double h = 1e-6;
  for (double xv : {-0.9, -0.2, 0.1, 0.8}) {
    const double fd = (eval(xv + h).v - eval(xv - h).v) / (2 * h);
    CHECK(demtest::rel_err(eval(xv).d[0], fd) <= 1e-6);
  }
}
