#include "dem/fem.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dem::fem {

namespace {

constexpr double kGauss = 0.57735026918962576;  // 1/sqrt(3)

struct Quad {
  // Shape values and derivatives (w.r.t. x, y) for a rectangular element of
  // size hx x hy, at local coordinates (xi, eta).
  std::array<double, 4> n;
  std::array<double, 4> dx;
  std::array<double, 4> dy;
};

Quad shape(double xi, double eta, double hx, double hy) {
  Quad q;
  const std::array<double, 4> sx{-1.0, 1.0, 1.0, -1.0};
  const std::array<double, 4> sy{-1.0, -1.0, 1.0, 1.0};
  for (int a = 0; a < 4; ++a) {
    q.n[a] = 0.25 * (1.0 + sx[a] * xi) * (1.0 + sy[a] * eta);
    q.dx[a] = 0.25 * sx[a] * (1.0 + sy[a] * eta) * (2.0 / hx);
    q.dy[a] = 0.25 * sy[a] * (1.0 + sx[a] * xi) * (2.0 / hy);
  }
  return q;
}

Eigen::Matrix3d elastic_D(double youngs, double poisson) {
  Eigen::Matrix3d d;
  const double f = youngs / (1.0 - poisson * poisson);
  d << f, f * poisson, 0.0, f * poisson, f, 0.0, 0.0, 0.0,
      0.5 * f * (1.0 - poisson);
  return d;
}

using Trips = std::vector<Eigen::Triplet<double>>;

Eigen::VectorXd solve_dirichlet(const Eigen::SparseMatrix<double>& k,
                                const Eigen::VectorXd& f,
                                const std::vector<int>& fixed,
                                const Eigen::VectorXd& fixed_vals) {
  const Eigen::Index n = k.rows();
  std::vector<int> map(n, -1);
  std::vector<char> is_fixed(n, 0);
  for (std::size_t i = 0; i < fixed.size(); ++i) is_fixed[fixed[i]] = 1;
  Eigen::Index nf = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!is_fixed[i]) map[i] = static_cast<int>(nf++);

  Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < fixed.size(); ++i)
    full[fixed[i]] = fixed_vals[static_cast<Eigen::Index>(i)];

  Eigen::VectorXd rhs(nf);
  for (Eigen::Index i = 0; i < n; ++i)
    if (map[i] >= 0) rhs[map[i]] = f[i];
  // rhs -= K_fc * u_c
  for (Eigen::Index col = 0; col < n; ++col) {
    if (!is_fixed[col]) continue;
    const double uc = full[col];
    if (uc == 0.0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it)
      if (map[it.row()] >= 0) rhs[map[it.row()]] -= it.value() * uc;
  }

  Trips trips;
  trips.reserve(static_cast<std::size_t>(k.nonZeros()));
  for (Eigen::Index col = 0; col < n; ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it)
      if (map[it.row()] >= 0 && map[col] >= 0)
        trips.emplace_back(map[it.row()], map[col], it.value());
  Eigen::SparseMatrix<double> kf(nf, nf);
  kf.setFromTriplets(trips.begin(), trips.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(kf);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("fem: singular stiffness (insufficient constraints?)");
  const Eigen::VectorXd uf = ldlt.solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i)
    if (map[i] >= 0) full[i] = uf[map[i]];
  return full;
}

}  // namespace

FemSolution fem_solve(const prob::ProblemDef& prob, int nx, int ny) {
  using prob::ProblemCode;
  if (prob.dim != 2 || prob.code == ProblemCode::Kirsch)
    throw std::invalid_argument("fem_solve: rectangle problems only");

  FemSolution s;
  s.nx = nx;
  s.ny = ny;
  s.width = prob.length;
  s.height = 3.0 * prob.length;
  const double hx = s.width / nx;
  const double hy = s.height / ny;
  const int n_nodes = (nx + 1) * (ny + 1);

  s.node_xy.resize(n_nodes, 2);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      s.node_xy(s.node_id(i, j), 0) = i * hx;
      s.node_xy(s.node_id(i, j), 1) = j * hy;
    }

  auto element_nodes = [&](int i, int j) {
    return std::array<int, 4>{s.node_id(i, j), s.node_id(i + 1, j),
                              s.node_id(i + 1, j + 1), s.node_id(i, j + 1)};
  };
  const std::array<double, 2> gp{-kGauss, kGauss};

  // -- thermal solve (staggered, first) ---------------------------------
  s.has_temp = prob.thermal;
  if (prob.thermal) {
    Trips trips;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const auto en = element_nodes(i, j);
        const double kc =
            prob.material.conductivity((i + 0.5) * hx, (j + 0.5) * hy);
        Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
        for (double xi : gp)
          for (double eta : gp) {
            const Quad q = shape(xi, eta, hx, hy);
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                ke(a, b) +=
                    kc * (q.dx[a] * q.dx[b] + q.dy[a] * q.dy[b]) * hx * hy / 4.0;
          }
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) trips.emplace_back(en[a], en[b], ke(a, b));
      }
    Eigen::SparseMatrix<double> kt(n_nodes, n_nodes);
    kt.setFromTriplets(trips.begin(), trips.end());

    std::vector<int> fixed;
    std::vector<double> vals;
    for (int i = 0; i <= nx; ++i) {
      fixed.push_back(s.node_id(i, 0));
      vals.push_back(0.0);
      fixed.push_back(s.node_id(i, ny));
      vals.push_back(1.0);
    }
    s.temp = solve_dirichlet(
        kt, Eigen::VectorXd::Zero(n_nodes), fixed,
        Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));
  }

  // -- elastic solve ------------------------------------------------------
  const int n_dof = 2 * n_nodes;
  Trips trips;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dof);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const auto en = element_nodes(i, j);
      const double ec = prob.material.youngs((i + 0.5) * hx, (j + 0.5) * hy);
      const Eigen::Matrix3d d = elastic_D(ec, prob.material.poisson);
      Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
      Eigen::Matrix<double, 8, 1> fe = Eigen::Matrix<double, 8, 1>::Zero();
      for (double xi : gp)
        for (double eta : gp) {
          const Quad q = shape(xi, eta, hx, hy);
          Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
          for (int a = 0; a < 4; ++a) {
            b(0, 2 * a) = q.dx[a];
            b(1, 2 * a + 1) = q.dy[a];
            b(2, 2 * a) = q.dy[a];
            b(2, 2 * a + 1) = q.dx[a];
          }
          const double dv = hx * hy / 4.0;
          ke += b.transpose() * d * b * dv;
          if (prob.thermal) {
            double tg = 0.0;
            for (int a = 0; a < 4; ++a) tg += q.n[a] * s.temp[en[a]];
            const double th =
                prob.material.alpha * (tg - prob.material.t_ref);
            const Eigen::Vector3d eps_th(th, th, 0.0);
            fe += b.transpose() * (d * eps_th) * dv;
          }
        }
      for (int a = 0; a < 4; ++a)
        for (int b2 = 0; b2 < 4; ++b2)
          for (int c = 0; c < 2; ++c)
            for (int e = 0; e < 2; ++e)
              trips.emplace_back(2 * en[a] + c, 2 * en[b2] + e,
                                 ke(2 * a + c, 2 * b2 + e));
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) f[2 * en[a] + c] += fe(2 * a + c);
    }
  Eigen::SparseMatrix<double> k(n_dof, n_dof);
  k.setFromTriplets(trips.begin(), trips.end());

  // Consistent top-edge traction loads.
  for (const auto& tr : prob.tractions) {
    if (tr.group != "top") continue;
    for (int i = 0; i < nx; ++i) {
      for (int corner : {i, i + 1}) {
        const int nid = s.node_id(corner, ny);
        f[2 * nid + 0] += 0.5 * hx * tr.value[0];
        f[2 * nid + 1] += 0.5 * hx * tr.value[1];
      }
    }
  }

  std::vector<int> fixed;
  std::vector<double> vals;
  for (int i = 0; i <= nx; ++i) {
    fixed.push_back(2 * s.node_id(i, 0));
    vals.push_back(0.0);
    fixed.push_back(2 * s.node_id(i, 0) + 1);
    vals.push_back(0.0);
  }
  const bool top_pinned = prob.code == ProblemCode::TwoDFgmElasDirch ||
                          prob.code == ProblemCode::TwoDFgmThermoElas;
  if (top_pinned) {
    for (int i = 0; i <= nx; ++i) {
      fixed.push_back(2 * s.node_id(i, ny) + 1);
      vals.push_back(1.0);
    }
  }
  const Eigen::VectorXd u_full = solve_dirichlet(
      k, f, fixed,
      Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));

  s.u.resize(n_nodes, 2);
  for (int nid = 0; nid < n_nodes; ++nid) {
    s.u(nid, 0) = u_full[2 * nid];
    s.u(nid, 1) = u_full[2 * nid + 1];
  }

  // Reactions on the clamped bottom edge: r = K u - f_applied there.
  const Eigen::VectorXd r = k * u_full - f;
  for (int i = 0; i <= nx; ++i) {
    s.bottom_reaction[0] += r[2 * s.node_id(i, 0)];
    s.bottom_reaction[1] += r[2 * s.node_id(i, 0) + 1];
  }

  // Centroid stress/strain, patch-averaged to nodes.
  s.nodal_stress = Eigen::MatrixXd::Zero(n_nodes, 3);
  s.nodal_eel = Eigen::MatrixXd::Zero(n_nodes, 3);
  Eigen::VectorXd hits = Eigen::VectorXd::Zero(n_nodes);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const auto en = element_nodes(i, j);
      const double ec = prob.material.youngs((i + 0.5) * hx, (j + 0.5) * hy);
      const Eigen::Matrix3d d = elastic_D(ec, prob.material.poisson);
      const Quad q = shape(0.0, 0.0, hx, hy);
      Eigen::Vector3d eps = Eigen::Vector3d::Zero();  // engineering shear
      double tg = 0.0;
      for (int a = 0; a < 4; ++a) {
        eps[0] += q.dx[a] * s.u(en[a], 0);
        eps[1] += q.dy[a] * s.u(en[a], 1);
        eps[2] += q.dy[a] * s.u(en[a], 0) + q.dx[a] * s.u(en[a], 1);
        if (prob.thermal) tg += q.n[a] * s.temp[en[a]];
      }
      Eigen::Vector3d eel = eps;
      if (prob.thermal) {
        const double th = prob.material.alpha * (tg - prob.material.t_ref);
        eel[0] -= th;
        eel[1] -= th;
      }
      const Eigen::Vector3d sig = d * eel;
      const Eigen::Vector3d eel_tensor(eel[0], eel[1], 0.5 * eel[2]);
      for (int a = 0; a < 4; ++a) {
        s.nodal_stress.row(en[a]) += sig.transpose();
        s.nodal_eel.row(en[a]) += eel_tensor.transpose();
        hits[en[a]] += 1.0;
      }
    }
  for (int nid = 0; nid < n_nodes; ++nid) {
    s.nodal_stress.row(nid) /= hits[nid];
    s.nodal_eel.row(nid) /= hits[nid];
  }
  return s;
}

ref::RefField FemSolution::at(const Eigen::MatrixXd& pts) const {
  const Eigen::Index n = pts.rows();
  ref::RefField f;
  f.u = Eigen::MatrixXd::Zero(n, 2);
  f.grad_u[0] = Eigen::MatrixXd::Zero(n, 2);
  f.grad_u[1] = Eigen::MatrixXd::Zero(n, 2);
  f.has_temp = has_temp;
  f.temp = Eigen::VectorXd::Zero(n);
  f.grad_temp = Eigen::MatrixXd::Zero(n, 2);

  const double hx = width / nx;
  const double hy = height / ny;
  for (Eigen::Index p = 0; p < n; ++p) {
    const double x = pts(p, 0), y = pts(p, 1);
    const int i = std::clamp(static_cast<int>(x / hx), 0, nx - 1);
    const int j = std::clamp(static_cast<int>(y / hy), 0, ny - 1);
    const double xi = 2.0 * (x - i * hx) / hx - 1.0;
    const double eta = 2.0 * (y - j * hy) / hy - 1.0;
    const Quad q = shape(xi, eta, hx, hy);
    const std::array<int, 4> en{node_id(i, j), node_id(i + 1, j),
                                node_id(i + 1, j + 1), node_id(i, j + 1)};
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 2; ++c) {
        f.u(p, c) += q.n[a] * u(en[a], c);
        f.grad_u[c](p, 0) += q.dx[a] * u(en[a], c);
        f.grad_u[c](p, 1) += q.dy[a] * u(en[a], c);
      }
      if (has_temp) {
        f.temp[p] += q.n[a] * temp[en[a]];
        f.grad_temp(p, 0) += q.dx[a] * temp[en[a]];
        f.grad_temp(p, 1) += q.dy[a] * temp[en[a]];
      }
    }
  }
  return f;
}

Eigen::MatrixXd FemSolution::interp(const Eigen::MatrixXd& nodal,
                                    const Eigen::MatrixXd& pts) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(pts.rows(), nodal.cols());
  const double hx = width / nx;
  const double hy = height / ny;
  for (Eigen::Index p = 0; p < pts.rows(); ++p) {
    const double x = pts(p, 0), y = pts(p, 1);
    const int i = std::clamp(static_cast<int>(x / hx), 0, nx - 1);
    const int j = std::clamp(static_cast<int>(y / hy), 0, ny - 1);
    const double xi = 2.0 * (x - i * hx) / hx - 1.0;
    const double eta = 2.0 * (y - j * hy) / hy - 1.0;
    const Quad q = shape(xi, eta, hx, hy);
    const std::array<int, 4> en{node_id(i, j), node_id(i + 1, j),
                                node_id(i + 1, j + 1), node_id(i, j + 1)};
    for (int a = 0; a < 4; ++a) out.row(p) += q.n[a] * nodal.row(en[a]);
  }
  return out;
}

}  // namespace dem::fem
