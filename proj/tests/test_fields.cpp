#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dem/engines.hpp"
#include "dem/problems.hpp"
#include "dem/trainer.hpp"
#include "dem/transforms.hpp"

using namespace dem;

namespace {

ad::Jet<double, 1> jet1(double v, double d) { return {v, {d}}; }

// Evaluate a 1d transform at x for fixed net outputs v.
fields::FieldJets<double, 1> tf1(fields::TransformId id, double x,
                                 std::vector<double> vs) {
  std::array<double, 1> c{x};
  auto xj = ad::dual_lift<double, 1>(c, 1.0, 0.0);
  std::vector<ad::Jet<double, 1>> v;
  for (double q : vs) v.push_back(jet1(q, 0.0));
  return fields::transform_1d(id, xj[0], v);
}

fields::FieldJets<double, 2> tf2(fields::TransformId id, double x1, double x2,
                                 std::vector<double> vs, double length) {
  std::array<double, 2> c{x1, x2};
  auto xj = ad::dual_lift<double, 2>(c, 1.0, 0.0);
  std::vector<ad::Jet<double, 2>> v;
  for (double q : vs) v.push_back(ad::Jet<double, 2>{q, {0.0, 0.0}});
  return fields::transform_2d(id, xj[0], xj[1], v, length);
}

}  // namespace

TEST_CASE("pinned-end transform") {
  using fields::TransformId;
  CHECK(tf1(TransformId::Dirch1d, 0.0, {3.7}).u[0].v == 0.0);
  CHECK(tf1(TransformId::Dirch1d, 1.0, {-2.2}).u[0].v == 1.0);
  CHECK(tf1(TransformId::Dirch1d, 0.5, {2.0}).u[0].v ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("left-pinned transform leaves the loaded end free") {
  using fields::TransformId;
  CHECK(tf1(TransformId::Neu1d, 0.0, {9.9}).u[0].v == 0.0);
  CHECK(tf1(TransformId::Neu1d, 1.0, {1.5}).u[0].v ==
        doctest::Approx(1.5).epsilon(1e-15));
  // d/dx (x v) at x=0 equals v(0): no spurious gradient pin.
  std::array<double, 1> c{0.0};
  auto xj = ad::dual_lift<double, 1>(c, 1.0, 0.0);
  std::vector<ad::Jet<double, 1>> v{jet1(0.8, 0.31)};
  auto f = fields::transform_1d(TransformId::Neu1d, xj[0], v);
  CHECK(f.u[0].d[0] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("coupled transform pins both fields at both ends") {
  using fields::TransformId;
  auto f0 = tf1(TransformId::Thermo1d, 0.0, {1.1, -0.4});
  CHECK(f0.u[0].v == 0.0);
  CHECK(f0.temp.v == 0.0);
  auto f1 = tf1(TransformId::Thermo1d, 1.0, {1.1, -0.4});
  CHECK(f1.u[0].v == 1.0);
  CHECK(f1.temp.v == 1.0);
  auto fm = tf1(TransformId::Thermo1d, 0.5, {0.0, 0.0});
  CHECK(fm.u[0].v == doctest::Approx(0.5));
  CHECK(fm.temp.v == doctest::Approx(0.5));
}

TEST_CASE("coordinate-product transform pins the symmetry planes") {
  using fields::TransformId;
  CHECK(tf2(TransformId::Hadamard, 0.0, 0.3, {5.0, 5.0}, 1.0).u[0].v == 0.0);
  CHECK(tf2(TransformId::Hadamard, 0.3, 0.0, {5.0, 5.0}, 1.0).u[1].v == 0.0);
  auto f = tf2(TransformId::Hadamard, 0.2, 0.4, {1.0, 2.0}, 1.0);
  CHECK(f.u[0].v == doctest::Approx(0.2));
  CHECK(f.u[1].v == doctest::Approx(0.8));
}

TEST_CASE("clamped-bottom transform") {
  using fields::TransformId;
  auto f0 = tf2(TransformId::Bottom2d, 0.1, 0.0, {0.5, -0.2}, 1.0);
  CHECK(f0.u[0].v == 0.0);
  CHECK(f0.u[1].v == 0.0);
  auto f1 = tf2(TransformId::Bottom2d, 0.1, 1.0, {0.5, -0.2}, 1.0);
  CHECK(f1.u[0].v == doctest::Approx(0.5));
  CHECK(f1.u[1].v == doctest::Approx(-0.2));
  auto ftop = tf2(TransformId::Bottom2d, 0.1, 3.0, {0.5, -0.2}, 1.0);
  CHECK(ftop.u[1].v == doctest::Approx(3.0 * -0.2));
}

TEST_CASE("top-displacement transform pins u2 = 1 at the top edge") {
  using fields::TransformId;
  auto f0 = tf2(TransformId::Dirch2d, 0.4, 0.0, {2.0, 3.0}, 1.0);
  CHECK(f0.u[0].v == 0.0);
  CHECK(f0.u[1].v == 0.0);
  auto ftop = tf2(TransformId::Dirch2d, 0.4, 3.0, {2.0, -7.0}, 1.0);
  CHECK(ftop.u[1].v == doctest::Approx(1.0).epsilon(1e-15));
  auto fmid = tf2(TransformId::Dirch2d, 0.5, 1.5, {0.0, 0.0}, 1.0);
  CHECK(fmid.u[1].v == doctest::Approx(0.5));
}

TEST_CASE("coupled 2d transform pins displacement and temperature") {
  using fields::TransformId;
  auto f0 = tf2(TransformId::Thermo2d, 0.4, 0.0, {1.0, 2.0, 3.0}, 1.0);
  CHECK(f0.u[0].v == 0.0);
  CHECK(f0.u[1].v == 0.0);
  CHECK(f0.temp.v == 0.0);
  auto ftop = tf2(TransformId::Thermo2d, 0.4, 3.0, {1.0, 2.0, 3.0}, 1.0);
  CHECK(ftop.u[0].v == doctest::Approx(3.0 * 1.0));
  CHECK(ftop.u[1].v == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ftop.temp.v == doctest::Approx(1.0).epsilon(1e-15));
  auto fmid = tf2(TransformId::Thermo2d, 0.4, 1.5, {0.0, 0.0, 0.0}, 1.0);
  CHECK(fmid.u[1].v == doctest::Approx(0.5));
  CHECK(fmid.temp.v == doctest::Approx(0.5));
}

TEST_CASE("a squared-coordinate transform would pin the gradient; ours do not") {
  // The map x^2 + x^2 (1 - x^2) v forces du/dx = 0 at x = 0 for every v.
  // Verify that defect, then verify the implemented map keeps the gradient
  // free for generic network outputs.
  std::array<double, 1> c{0.0};
  auto xj = ad::dual_lift<double, 1>(c, 1.0, 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double v = dist(rng);
    const double dv = dist(rng);
    ad::Jet<double, 1> vj{v, {dv}};
    auto x2 = xj[0] * xj[0];
    auto bad = x2 + x2 * (1.0 - x2) * vj;
    CHECK(bad.d[0] == 0.0);
    std::vector<ad::Jet<double, 1>> vs{vj};
    auto good = fields::transform_1d(fields::TransformId::Dirch1d, xj[0], vs);
    CHECK(good.u[0].d[0] == doctest::Approx(1.0 + v).epsilon(1e-14));
  }
}

TEST_CASE("Dirichlet data holds exactly for 1000 random parameter draws") {
  struct BcPoint {
    double x1, x2;
    int comp;        // 0: u1, 1: u2, 2: T
    double value;
  };
  struct Case {
    prob::ProblemCode code;
    std::vector<BcPoint> pins;
  };
  const std::vector<Case> cases{
      {prob::ProblemCode::OneDFgmElasDirch,
       {{0.0, 0.0, 0, 0.0}, {1.0, 0.0, 0, 1.0}}},
      {prob::ProblemCode::OneDFgmElasNeu, {{0.0, 0.0, 0, 0.0}}},
      {prob::ProblemCode::OneDElasBf, {{0.0, 0.0, 0, 0.0}}},
      {prob::ProblemCode::OneDFgmThermoElas,
       {{0.0, 0.0, 0, 0.0},
        {1.0, 0.0, 0, 1.0},
        {0.0, 0.0, 2, 0.0},
        {1.0, 0.0, 2, 1.0}}},
      {prob::ProblemCode::Kirsch,
       {{0.0, 0.25, 0, 0.0}, {0.31, 0.0, 1, 0.0}}},
      {prob::ProblemCode::TwoDFgmElasNeu,
       {{0.3, 0.0, 0, 0.0}, {0.7, 0.0, 1, 0.0}}},
      {prob::ProblemCode::TwoDFgmElasDirch,
       {{0.3, 0.0, 0, 0.0}, {0.7, 0.0, 1, 0.0}, {0.4, 3.0, 1, 1.0}}},
      {prob::ProblemCode::TwoDFgmThermoElas,
       {{0.3, 0.0, 0, 0.0},
        {0.7, 0.0, 1, 0.0},
        {0.2, 0.0, 2, 0.0},
        {0.4, 3.0, 1, 1.0},
        {0.4, 3.0, 2, 1.0}}}};

  // Spread the draw budget over the eight problems.
  const int draws = 125;
  for (const auto& cs : cases) {
    prob::ProblemDef p = prob::make_problem(cs.code);
    for (auto& net : p.nets)
      for (auto& w : net.hidden) w = std::min(w, 6);
    Eigen::MatrixXd pts(cs.pins.size(), 2);
    for (std::size_t i = 0; i < cs.pins.size(); ++i)
      pts.row(static_cast<Eigen::Index>(i)) << cs.pins[i].x1, cs.pins[i].x2;
    double worst = 0.0;
    for (int d = 0; d < draws; ++d) {
      auto params = train::init_models(p, 1000 + 31 * d);
      const eng::Prediction pred = eng::predict(p, params, pts);
      for (std::size_t i = 0; i < cs.pins.size(); ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        const double got = cs.pins[i].comp == 2   ? pred.temp[e]
                           : cs.pins[i].comp == 1 ? pred.u(e, 1)
                                                  : pred.u(e, 0);
        worst = std::max(worst, std::abs(got - cs.pins[i].value));
      }
    }
    CHECK(worst <= 1e-14);
  }
}
