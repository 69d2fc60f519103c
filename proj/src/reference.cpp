#include "dem/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "dem/fem.hpp"

namespace dem::ref {

Line1d analytic_1d(prob::ProblemCode code, double x) {
  using prob::ProblemCode;
  Line1d r;
  switch (code) {
    case ProblemCode::OneDFgmElasDirch:
      // (E u')' = 0 with E = 1/(1+x), u(0)=0, u(1)=1.
      r.u = (x * x + 2.0 * x) / 3.0;
      r.du = (2.0 * x + 2.0) / 3.0;
      r.eel = r.du;
      r.stress = r.du / (1.0 + x);  // = 2/3 everywhere
      return r;
    case ProblemCode::OneDFgmElasNeu:
      // Same rod, u(0)=0 and unit end traction: stress = 1 everywhere.
      r.u = (2.0 * x + x * x) / 2.0;
      r.du = 1.0 + x;
      r.eel = r.du;
      r.stress = 1.0;
      return r;
    case ProblemCode::OneDElasBf:
      // u'' + 1 = 0 with u(0)=0, u'(1)=1.
      r.u = (4.0 * x - x * x) / 2.0;
      r.du = 2.0 - x;
      r.eel = r.du;
      r.stress = r.du;
      return r;
    case ProblemCode::OneDFgmThermoElas:
      // Coupled rod with E=1/(1+x), k=10/(1+x), alpha=1, pinned ends.
      r.u = x * x * x / 9.0 + 14.0 / 27.0 * x * x + 10.0 / 27.0 * x;
      r.du = x * x / 3.0 + 28.0 / 27.0 * x + 10.0 / 27.0;
      r.temp = (2.0 * x + x * x) / 3.0;
      r.dtemp = (2.0 + 2.0 * x) / 3.0;
      r.has_temp = true;
      r.eel = r.du - r.temp;
      r.stress = r.eel / (1.0 + x);  // = 10/27 everywhere
      return r;
    default:
      throw std::invalid_argument("analytic_1d: not a 1d problem");
  }
}

KirschField kirsch_analytic(const Eigen::Vector2d& x, double far_stress,
                            double radius, double youngs, double poisson) {
  const double r = x.norm();
  if (r < radius)
    throw std::domain_error("kirsch_analytic: point inside the hole");
  const double th = std::atan2(x[1], x[0]);
  const double c = std::cos(th), s = std::sin(th);
  const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
  const double a2 = radius * radius / (r * r);
  const double a4 = a2 * a2;
  const double half = 0.5 * far_stress;

  const double srr = half * (1.0 - a2) + half * (1.0 - 4.0 * a2 + 3.0 * a4) * c2;
  const double stt = half * (1.0 + a2) - half * (1.0 + 3.0 * a4) * c2;
  const double srt = -half * (1.0 + 2.0 * a2 - 3.0 * a4) * s2;

  // Plane-stress displacements via the Kolosov constant.
  const double mu = youngs / (2.0 * (1.0 + poisson));
  const double kap = (3.0 - poisson) / (1.0 + poisson);
  const double q = far_stress / (4.0 * mu);
  const double a2r = radius * radius / r;
  const double a4r3 = a2r * a2r / r;
  const double ur =
      q * (0.5 * (kap - 1.0) * r + a2r + (r + (kap + 1.0) * a2r - a4r3) * c2);
  const double ut = -q * (r + (kap - 1.0) * a2r + a4r3) * s2;

  KirschField f;
  f.u[0] = ur * c - ut * s;
  f.u[1] = ur * s + ut * c;
  f.stress[0] = srr * c * c + stt * s * s - 2.0 * srt * s * c;
  f.stress[1] = srr * s * s + stt * c * c + 2.0 * srt * s * c;
  f.stress[2] = (srr - stt) * s * c + srt * (c * c - s * s);
  // Plane-stress compliance (tensor shear strain).
  f.eel[0] = (f.stress[0] - poisson * f.stress[1]) / youngs;
  f.eel[1] = (f.stress[1] - poisson * f.stress[0]) / youngs;
  f.eel[2] = (1.0 + poisson) * f.stress[2] / youngs;
  return f;
}

namespace {

class Analytic1dRef : public ReferenceSolution {
 public:
  explicit Analytic1dRef(prob::ProblemCode code) : code_(code) {}

  RefField at(const Eigen::MatrixXd& pts) const override {
    const Eigen::Index n = pts.rows();
    RefField f;
    f.u = Eigen::MatrixXd::Zero(n, 2);
    f.grad_u[0] = Eigen::MatrixXd::Zero(n, 2);
    f.grad_u[1] = Eigen::MatrixXd::Zero(n, 2);
    f.temp = Eigen::VectorXd::Zero(n);
    f.grad_temp = Eigen::MatrixXd::Zero(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Line1d v = analytic_1d(code_, pts(i, 0));
      f.u(i, 0) = v.u;
      f.grad_u[0](i, 0) = v.du;
      f.temp[i] = v.temp;
      f.grad_temp(i, 0) = v.dtemp;
      f.has_temp = v.has_temp;
    }
    return f;
  }

 private:
  prob::ProblemCode code_;
};

class KirschRef : public ReferenceSolution {
 public:
  KirschRef(double far_stress, double radius, double youngs, double poisson)
      : far_(far_stress), a_(radius), e_(youngs), nu_(poisson) {}

  RefField at(const Eigen::MatrixXd& pts) const override {
    const Eigen::Index n = pts.rows();
    RefField f;
    f.u.resize(n, 2);
    f.grad_u[0].resize(n, 2);
    f.grad_u[1].resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const KirschField v =
          kirsch_analytic(pts.row(i).transpose(), far_, a_, e_, nu_);
      f.u.row(i) = v.u.transpose();
      // The energy only sees the symmetric part; report the strain itself.
      f.grad_u[0](i, 0) = v.eel[0];
      f.grad_u[0](i, 1) = v.eel[2];
      f.grad_u[1](i, 0) = v.eel[2];
      f.grad_u[1](i, 1) = v.eel[1];
    }
    return f;
  }

 private:
  double far_, a_, e_, nu_;
};

}  // namespace

std::unique_ptr<ReferenceSolution> make_reference(const prob::ProblemDef& p,
                                                  int fem_nx, int fem_ny) {
  switch (p.oracle) {
    case prob::OracleKind::Analytic1d:
      return std::make_unique<Analytic1dRef>(p.code);
    case prob::OracleKind::KirschPlate:
      return std::make_unique<KirschRef>(p.far_stress, p.hole_radius, 1.0,
                                         p.material.poisson);
    case prob::OracleKind::Fem:
      return std::make_unique<fem::FemReference>(
          fem::fem_solve(p, fem_nx, fem_ny));
  }
  throw std::logic_error("make_reference: unknown oracle");
}

ReferenceField reference_at_nodes(const prob::ProblemDef& p,
                                  const mesh::NodeSet& nodes, int fem_nx,
                                  int fem_ny) {
  const Eigen::Index n = nodes.points.rows();
  ReferenceField rf;
  rf.points = nodes.points;
  rf.u = Eigen::MatrixXd::Zero(n, 2);
  rf.temp = Eigen::VectorXd::Zero(n);
  rf.eel = Eigen::MatrixXd::Zero(n, 3);
  rf.stress = Eigen::MatrixXd::Zero(n, 3);

  switch (p.oracle) {
    case prob::OracleKind::Analytic1d: {
      rf.provenance = "analytical";
      for (Eigen::Index i = 0; i < n; ++i) {
        const Line1d v = analytic_1d(p.code, nodes.points(i, 0));
        rf.u(i, 0) = v.u;
        rf.temp[i] = v.temp;
        rf.has_temp = v.has_temp;
        rf.eel(i, 0) = v.eel;
        rf.stress(i, 0) = v.stress;
      }
      return rf;
    }
    case prob::OracleKind::KirschPlate: {
      rf.provenance = "analytical";
      for (Eigen::Index i = 0; i < n; ++i) {
        const KirschField v =
            kirsch_analytic(nodes.points.row(i).transpose(), p.far_stress,
                            p.hole_radius, 1.0, p.material.poisson);
        rf.u.row(i) = v.u.transpose();
        rf.eel.row(i) = v.eel.transpose();
        rf.stress.row(i) = v.stress.transpose();
      }
      return rf;
    }
    case prob::OracleKind::Fem: {
      rf.provenance = "fem-oracle";
      const fem::FemSolution sol = fem::fem_solve(p, fem_nx, fem_ny);
      const RefField f = sol.at(nodes.points);
      rf.u = f.u;
      rf.has_temp = f.has_temp;
      if (f.has_temp) rf.temp = f.temp;
      rf.eel = sol.interp(sol.nodal_eel, nodes.points);
      rf.stress = sol.interp(sol.nodal_stress, nodes.points);
      return rf;
    }
  }
  throw std::logic_error("reference_at_nodes: unknown oracle");
}

}  // namespace dem::ref
