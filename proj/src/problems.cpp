#include "dem/problems.hpp"

#include <stdexcept>

#include "dem/reference.hpp"

namespace dem::prob {

std::string to_string(ProblemCode code) {
  switch (code) {
    case ProblemCode::OneDFgmElasDirch:
      return "1D-FGM-ELAS-DIRCH";
    case ProblemCode::OneDFgmElasNeu:
      return "1D-FGM-ELAS-NEU";
    case ProblemCode::OneDElasBf:
      return "1D-ELAS-BF";
    case ProblemCode::OneDFgmThermoElas:
      return "1D-FGM-THERMO-ELAS";
    case ProblemCode::Kirsch:
      return "KIRSCH";
    case ProblemCode::TwoDFgmElasNeu:
      return "2D-FGM-ELAS-NEU";
    case ProblemCode::TwoDFgmElasDirch:
      return "2D-FGM-ELAS-DIRCH";
    case ProblemCode::TwoDFgmThermoElas:
      return "2D-FGM-THERMO-ELAS";
  }
  throw std::invalid_argument("unknown problem code");
}

ProblemCode code_from_string(const std::string& name) {
  for (ProblemCode c : all_codes())
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown problem code: " + name);
}

std::vector<ProblemCode> all_codes() {
  return {ProblemCode::OneDFgmElasDirch, ProblemCode::OneDFgmElasNeu,
          ProblemCode::OneDElasBf,       ProblemCode::OneDFgmThermoElas,
          ProblemCode::Kirsch,           ProblemCode::TwoDFgmElasNeu,
          ProblemCode::TwoDFgmElasDirch, ProblemCode::TwoDFgmThermoElas};
}

namespace {

nn::MlpConfig net(int in, std::vector<int> hidden, int out,
                  nn::Activation act) {
  nn::MlpConfig c;
  c.input_dim = in;
  c.output_dim = out;
  c.hidden = std::move(hidden);
  c.activation = act;
  return c;
}

phys::MaterialModel graded_1d(double alpha) {
  phys::MaterialModel m;
  m.youngs = [](double x, double) { return 1.0 / (1.0 + x); };
  m.conductivity = [](double x, double) { return 10.0 / (1.0 + x); };
  m.poisson = 0.0;  // unused in 1d
  m.alpha = alpha;
  m.t_ref = 0.0;
  return m;
}

phys::MaterialModel graded_2d(double alpha) {
  phys::MaterialModel m;
  m.youngs = [](double, double y) { return 1.0 / (1.0 + y); };
  m.conductivity = [](double, double y) { return 10.0 / (1.0 + y); };
  m.poisson = 0.3;
  m.alpha = alpha;
  m.t_ref = 0.0;
  return m;
}

phys::MaterialModel unit_material() {
  phys::MaterialModel m;
  m.youngs = [](double, double) { return 1.0; };
  m.conductivity = [](double, double) { return 1.0; };
  m.poisson = 0.3;
  m.alpha = 0.0;
  m.t_ref = 0.0;
  return m;
}

}  // namespace

ProblemDef make_problem(ProblemCode code) {
  ProblemDef p;
  p.code = code;
  p.name = to_string(code);
  p.train.seed = 42;
  switch (code) {
    case ProblemCode::OneDFgmElasDirch:
      p.dim = 1;
      p.transform = fields::TransformId::Dirch1d;
      p.nets = {net(1, {5, 5}, 1, nn::Activation::Tanh)};
      p.material = graded_1d(0.0);
      p.oracle = OracleKind::Analytic1d;
      p.train.epochs = 5000;
      break;
    case ProblemCode::OneDFgmElasNeu:
      p.dim = 1;
      p.transform = fields::TransformId::Neu1d;
      p.nets = {net(1, {5, 5}, 1, nn::Activation::Tanh)};
      p.material = graded_1d(0.0);
      p.tractions.push_back({"right", {1.0, 0.0}, false});
      p.oracle = OracleKind::Analytic1d;
      p.train.epochs = 5000;
      break;
    case ProblemCode::OneDElasBf:
      p.dim = 1;
      p.transform = fields::TransformId::Neu1d;
      p.nets = {net(1, {5, 5}, 1, nn::Activation::Tanh)};
      p.material = unit_material();
      p.has_body_force = true;
      p.body_force = {1.0, 0.0};
      p.tractions.push_back({"right", {1.0, 0.0}, false});
      p.oracle = OracleKind::Analytic1d;
      p.train.epochs = 5000;
      break;
    case ProblemCode::OneDFgmThermoElas:
      p.dim = 1;
      p.thermal = true;
      p.transform = fields::TransformId::Thermo1d;
      p.nets = {net(1, {5, 5}, 1, nn::Activation::Tanh),
                net(1, {10, 10}, 1, nn::Activation::Tanh)};
      p.material = graded_1d(1.0);
      p.oracle = OracleKind::Analytic1d;
      p.train.epochs = 6000;
      break;
    case ProblemCode::Kirsch:
      p.dim = 2;
      p.transform = fields::TransformId::Hadamard;
      p.nets = {net(2, {100, 100, 100}, 2, nn::Activation::TanhSq)};
      p.material = unit_material();
      p.tractions.push_back({"right", {1.0, 0.0}, false});
      p.oracle = OracleKind::KirschPlate;
      p.train.epochs = 2500;
      p.train.decay_every = 1000;
      break;
    case ProblemCode::TwoDFgmElasNeu:
      p.dim = 2;
      p.transform = fields::TransformId::Bottom2d;
      p.nets = {net(2, {100, 100, 100}, 2, nn::Activation::TanhSq)};
      p.material = graded_2d(0.0);
      p.tractions.push_back({"top", {0.0, 1.0}, false});
      p.oracle = OracleKind::Fem;
      p.train.epochs = 4000;
      p.train.decay_every = 1000;
      break;
    case ProblemCode::TwoDFgmElasDirch:
      p.dim = 2;
      p.transform = fields::TransformId::Dirch2d;
      p.nets = {net(2, {100, 100, 100}, 2, nn::Activation::TanhSq)};
      p.material = graded_2d(0.0);
      p.oracle = OracleKind::Fem;
      p.train.epochs = 4000;
      p.train.decay_every = 1000;
      break;
    case ProblemCode::TwoDFgmThermoElas:
      p.dim = 2;
      p.thermal = true;
      p.transform = fields::TransformId::Thermo2d;
      p.nets = {net(2, {300, 300}, 3, nn::Activation::EluSq)};
      p.material = graded_2d(1.0);
      p.oracle = OracleKind::Fem;
      p.train.epochs = 3000;
      p.train.decay_every = 1000;
      break;
  }
  return p;
}

mesh::NodeSet build_nodes(const ProblemDef& prob) {
  switch (prob.code) {
    case ProblemCode::Kirsch:
      return mesh::plate_with_hole(prob.hole_radius, prob.plate_side,
                                   prob.sampling.plate_resolution);
    default:
      if (prob.dim == 1) return mesh::uniform_1d(prob.sampling.n_1d);
      return mesh::uniform_grid_2d(prob.sampling.nx, prob.sampling.ny,
                                   prob.length);
  }
}

Eigen::MatrixXd traction_values(const ProblemDef& prob,
                                const TractionSpec& spec,
                                const mesh::BoundaryGroup& group) {
  Eigen::MatrixXd t(group.points.rows(), 2);
  if (!spec.analytic_kirsch) {
    t.rowwise() = spec.value.transpose();
    return t;
  }
  for (Eigen::Index i = 0; i < group.points.rows(); ++i) {
    const auto f = ref::kirsch_analytic(group.points.row(i).transpose(),
                                        prob.far_stress, prob.hole_radius,
                                        1.0, prob.material.poisson);
    const Eigen::Vector2d n = group.normals.row(i).transpose();
    t(i, 0) = f.stress[0] * n[0] + f.stress[2] * n[1];
    t(i, 1) = f.stress[2] * n[0] + f.stress[1] * n[1];
  }
  return t;
}

}  // namespace dem::prob
