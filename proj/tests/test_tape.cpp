#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dem/jet.hpp"
#include "dem/mlp.hpp"
#include "dem/tape.hpp"
#include "testutil.hpp"

using namespace dem;
using demtest::fd_gradient;
using demtest::grad_error;

TEST_CASE("leaf construction and trivial sweep") {
  ad::Tape t;
  CHECK(t.value(t.scalar(0.0)) == 0.0);
  CHECK(t.value(t.scalar(1.5)) == 1.5);

  ad::Tape t2;
  ad::Var x = t2.scalar(0.7);
  t2.reverse(x);
  CHECK(t2.adjoint(x) == 1.0);
}

TEST_CASE("elementwise values and local partials") {
  ad::Tape t;
  ad::Var z = t.scalar(0.0);

  ad::Var th = ad::tanh(z);
  CHECK(t.value(th) == doctest::Approx(0.0));
  CHECK(t.node(th.idx).partial[0] == doctest::Approx(1.0));

  ad::Var th2 = ad::tanh_sq(z);
  CHECK(t.value(th2) == doctest::Approx(0.0));
  CHECK(t.node(th2.idx).partial[0] == doctest::Approx(0.0));

  ad::Var zn = t.scalar(-0.5);
  ad::Var e2 = ad::elu_sq(zn);
  const double elu_m05 = std::expm1(-0.5);
  CHECK(t.value(e2) == doctest::Approx(elu_m05 * elu_m05).epsilon(1e-12));
  CHECK(t.value(e2) == doctest::Approx(0.154818).epsilon(1e-5));
}

TEST_CASE("elu smoothing at zero uses derivative 1") {
  CHECK(ad::elu_deriv(0.0) == 1.0);
  CHECK(ad::elu(0.0) == 0.0);
  ad::Tape t;
  ad::Var z = t.scalar(0.0);
  ad::Var e2 = ad::elu_sq(z);
  CHECK(t.node(e2.idx).partial[0] == 0.0);  // 2*elu(0)*elu'(0)
}

TEST_CASE("division by zero raises a domain error") {
  ad::Tape t;
  ad::Var a = t.scalar(1.0);
  ad::Var b = t.scalar(0.0);
  CHECK_THROWS_AS(a / b, std::domain_error);
  CHECK_THROWS_AS(1.0 / b, std::domain_error);
}

TEST_CASE("reverse sweep: product rule") {
  ad::Tape t;
  ad::Var a = t.scalar(2.0);
  ad::Var b = t.scalar(3.0);
  ad::Var r = a * b;
  t.reverse(r);
  CHECK(t.adjoint(a) == doctest::Approx(3.0));
  CHECK(t.adjoint(b) == doctest::Approx(2.0));
}

TEST_CASE("reverse sweep: tanh chain") {
  ad::Tape t;
  ad::Var w = t.scalar(0.0);
  ad::Var x = t.scalar(1.0);
  ad::Var r = ad::tanh(w * x);
  t.reverse(r);
  CHECK(t.adjoint(w) == doctest::Approx(1.0));
}

TEST_CASE("parents precede children") {
  ad::Tape t;
  ad::Var a = t.scalar(1.0);
  ad::Var b = ad::tanh(a * 2.0 + 1.0);
  ad::Var c = b * a - 0.5;
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(t.size()); ++i) {
    CHECK(t.node(i).parent[0] < i);
    CHECK(t.node(i).parent[1] < i);
  }
  (void)c;
}

namespace {

// Scalar loss of a small MLP evaluated at a handful of points: sum of
// squared outputs. Used for gradient checks against finite differences.
double mlp_loss_plain(const nn::MlpConfig& cfg, const Eigen::VectorXd& flat) {
  nn::MlpParams p = nn::init_params(cfg);
  nn::unflatten(flat, p);
  auto refs = nn::make_param_refs(p);
  double loss = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double xv = -1.0 + 2.0 * i / 6.0;
    std::array<double, 1> coords{xv};
    auto x = ad::dual_lift<double, 1>(coords, 1.0, 0.0);
    auto out = nn::mlp_forward<double, double, 1>(refs, cfg.activation,
                                                  std::span(x.data(), 1));
    for (const auto& o : out) loss += o.v * o.v + 0.3 * o.d[0] * o.d[0];
  }
  return loss;
}

double mlp_loss_tape(const nn::MlpConfig& cfg, const Eigen::VectorXd& flat,
                     Eigen::VectorXd* grad) {
  nn::MlpParams p = nn::init_params(cfg);
  nn::unflatten(flat, p);
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  auto refs = nn::lift_params(tape, p, &leaves);
  ad::Var loss = tape.scalar(0.0);
  for (int i = 0; i < 7; ++i) {
    const double xv = -1.0 + 2.0 * i / 6.0;
    std::array<ad::Var, 1> coords{tape.scalar(xv)};
    auto x = ad::dual_lift<ad::Var, 1>(coords, tape.scalar(1.0),
                                       tape.scalar(0.0));
    auto out = nn::mlp_forward<ad::Var, ad::Var, 1>(refs, cfg.activation,
                                                    std::span(x.data(), 1));
    for (const auto& o : out)
      loss = loss + o.v * o.v + 0.3 * (o.d[0] * o.d[0]);
  }
  tape.reverse(loss);
  if (grad) {
    grad->resize(static_cast<Eigen::Index>(leaves.size()));
    for (std::size_t k = 0; k < leaves.size(); ++k)
      (*grad)[static_cast<Eigen::Index>(k)] = tape.adjoint(leaves[k]);
  }
  return tape.value(loss);
}

}  // namespace

TEST_CASE("tape gradients match finite differences on a 1-5-5-1 net") {
  for (nn::Activation act :
       {nn::Activation::Tanh, nn::Activation::TanhSq, nn::Activation::EluSq}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      nn::MlpConfig cfg;
      cfg.input_dim = 1;
      cfg.output_dim = 1;
      cfg.hidden = {5, 5};
      cfg.activation = act;
      cfg.seed = seed;
      Eigen::VectorXd flat = nn::flatten(nn::init_params(cfg));

      Eigen::VectorXd grad;
      const double v_tape = mlp_loss_tape(cfg, flat, &grad);
      const double v_plain = mlp_loss_plain(cfg, flat);
      CHECK(v_tape == doctest::Approx(v_plain).epsilon(1e-12));

      Eigen::VectorXd fd = fd_gradient(
          [&](const Eigen::VectorXd& q) { return mlp_loss_plain(cfg, q); },
          flat);
      CHECK(grad_error(grad, fd) <= 1e-5);
    }
  }
}

TEST_CASE("dual_lift identity seeding") {
  ad::Tape t;
  std::array<ad::Var, 1> c1{t.scalar(0.5)};
  auto x1 = ad::dual_lift<ad::Var, 1>(c1, t.scalar(1.0), t.scalar(0.0));
  CHECK(t.value(x1[0].v) == 0.5);
  CHECK(t.value(x1[0].d[0]) == 1.0);

  std::array<ad::Var, 2> c2{t.scalar(0.2), t.scalar(0.7)};
  auto x2 = ad::dual_lift<ad::Var, 2>(c2, t.scalar(1.0), t.scalar(0.0));
  CHECK(t.value(x2[0].d[0]) == 1.0);
  CHECK(t.value(x2[0].d[1]) == 0.0);
  CHECK(t.value(x2[1].d[0]) == 0.0);
  CHECK(t.value(x2[1].d[1]) == 1.0);
}

TEST_CASE("dual_lift composed with x^2 yields tangent 2x") {
  ad::Tape t;
  std::array<ad::Var, 1> c{t.scalar(0.3)};
  auto x = ad::dual_lift<ad::Var, 1>(c, t.scalar(1.0), t.scalar(0.0));
  auto u = x[0] * x[0];
  CHECK(t.value(u.d[0]) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("spatial tangent matches finite differences of the forward pass") {
  nn::MlpConfig cfg;
  cfg.input_dim = 2;
  cfg.output_dim = 2;
  cfg.hidden = {6, 6};
  cfg.activation = nn::Activation::TanhSq;
  cfg.seed = 11;
  nn::MlpParams p = nn::init_params(cfg);
  auto refs = nn::make_param_refs(p);

  auto eval = [&](double x0, double x1, int out) {
    std::array<double, 2> coords{x0, x1};
    auto x = ad::dual_lift<double, 2>(coords, 1.0, 0.0);
    auto o = nn::mlp_forward<double, double, 2>(refs, cfg.activation,
                                                std::span(x.data(), 2));
    return o[static_cast<std::size_t>(out)];
  };

  const double h = 1e-6;
  for (double x0 : {0.1, 0.4}) {
    for (double x1 : {0.25, 0.8}) {
      for (int out = 0; out < 2; ++out) {
        auto o = eval(x0, x1, out);
        const double fd0 =
            (eval(x0 + h, x1, out).v - eval(x0 - h, x1, out).v) / (2 * h);
        const double fd1 =
            (eval(x0, x1 + h, out).v - eval(x0, x1 - h, out).v) / (2 * h);
        CHECK(demtest::rel_err(o.d[0], fd0) <= 1e-6);
        CHECK(demtest::rel_err(o.d[1], fd1) <= 1e-6);
      }
    }
  }
}

TEST_CASE("identical inputs give bit-identical tapes and gradients") {
  nn::MlpConfig cfg;
  cfg.input_dim = 1;
  cfg.output_dim = 1;
  cfg.hidden = {5, 5};
  cfg.activation = nn::Activation::Tanh;
  cfg.seed = 5;
  Eigen::VectorXd flat = nn::flatten(nn::init_params(cfg));
  Eigen::VectorXd g1, g2;
  const double v1 = mlp_loss_tape(cfg, flat, &g1);
  const double v2 = mlp_loss_tape(cfg, flat, &g2);
  CHECK(v1 == v2);
  for (Eigen::Index i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}
