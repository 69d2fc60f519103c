#pragma once

// Discretized energy functional: internal elastic + thermal energy minus
// external work, assembled as weighted sums over a node set. The assembly
// is generic over the column algebra, so the identical code produces plain
// values, scalar-tape graphs, or batched-tape graphs.
//
// Dirichlet data enters through the admissibility transform only; embedded
// boundaries contribute no work term.

#include <Eigen/Core>
#include <optional>
#include <stdexcept>

#include "dem/columns.hpp"
#include "dem/mlp.hpp"
#include "dem/physics.hpp"
#include "dem/problems.hpp"
#include "dem/reference.hpp"
#include "dem/transforms.hpp"

namespace dem::loss {

template <class S>
struct LossParts {
  S elastic;
  S thermal;
  S external;
  S total;
};

struct LossValues {
  double elastic = 0.0;
  double thermal = 0.0;
  double external = 0.0;
  double total = 0.0;
};

template <class A>
LossValues values_of(const LossParts<typename A::S>& p) {
  LossValues v;
  v.elastic = A::sval(p.elastic);
  v.thermal = A::sval(p.thermal);
  v.external = A::sval(p.external);
  v.total = A::sval(p.total);
  return v;
}

// Pointwise energy densities from field jets; shared by every engine.
template <class A>
struct Densities {
  col::CV<A> elastic;
  col::CV<A> thermal;
  bool has_thermal = false;
};

template <class A>
Densities<A> energy_densities(const fields::FieldJets<col::CV<A>, 1>& f,
                              const prob::ProblemDef& prob,
                              const Eigen::MatrixXd& pts) {
  const Eigen::VectorXd e_vec = prob.material.youngs_at(pts);
  Densities<A> d;
  col::CV<A> eel = f.u[0].d[0];
  if (f.has_temp && prob.material.alpha != 0.0)
    eel = eel - prob.material.alpha * (f.temp.v - prob.material.t_ref);
  d.elastic = phys::strain_energy_1d(eel, e_vec);
  if (f.has_temp) {
    const Eigen::VectorXd k_vec = prob.material.conductivity_at(pts);
    d.thermal = phys::thermal_energy(f.temp.d[0] * f.temp.d[0], k_vec);
    d.has_thermal = true;
  }
  return d;
}

template <class A>
Densities<A> energy_densities(const fields::FieldJets<col::CV<A>, 2>& f,
                              const prob::ProblemDef& prob,
                              const Eigen::MatrixXd& pts) {
  const Eigen::VectorXd e_vec = prob.material.youngs_at(pts);
  Densities<A> d;
  phys::Voigt3<col::CV<A>> eel;
  eel.e11 = f.u[0].d[0];
  eel.e22 = f.u[1].d[1];
  eel.e12 = 0.5 * (f.u[0].d[1] + f.u[1].d[0]);
  if (f.has_temp && prob.material.alpha != 0.0) {
    col::CV<A> th = prob.material.alpha * (f.temp.v - prob.material.t_ref);
    eel.e11 = eel.e11 - th;
    eel.e22 = eel.e22 - th;
  }
  d.elastic = phys::strain_energy_plane(eel, e_vec, prob.material.poisson);
  if (f.has_temp) {
    const Eigen::VectorXd k_vec = prob.material.conductivity_at(pts);
    col::CV<A> gt2 = f.temp.d[0] * f.temp.d[0] + f.temp.d[1] * f.temp.d[1];
    d.thermal = phys::thermal_energy(gt2, k_vec);
    d.has_thermal = true;
  }
  return d;
}

// FieldFn: (A& alg, const Eigen::MatrixXd& pts) -> FieldJets<CV<A>, D>.
// AlgFactory: (Eigen::Index rows) -> A.
template <int D, class AlgFactory, class FieldFn>
auto assemble_loss(AlgFactory&& make_alg, const prob::ProblemDef& prob,
                   const mesh::NodeSet& nodes, FieldFn&& fields_at) {
  using A = decltype(make_alg(Eigen::Index(0)));
  using S = typename A::S;

  A alg = make_alg(nodes.points.rows());
  auto f = fields_at(alg, nodes.points);
  if (prob.thermal != f.has_temp)
    throw std::logic_error("assemble_loss: thermal field mismatch");
  Densities<A> den = energy_densities<A>(f, prob, nodes.points);

  LossParts<S> parts;
  parts.elastic = col::wsum(den.elastic, nodes.weights);
  parts.thermal =
      den.has_thermal ? col::wsum(den.thermal, nodes.weights) : alg.szero();

  S ext = alg.szero();
  if (prob.has_body_force) {
    for (int c = 0; c < D; ++c) {
      if (prob.body_force[c] == 0.0) continue;
      ext = A::sadd(ext, col::wsum(f.u[c].v,
                                   (nodes.weights * prob.body_force[c]).eval()));
    }
  }
  for (const auto& spec : prob.tractions) {
    const mesh::BoundaryGroup& g = nodes.group(spec.group);
    A alg_b = make_alg(g.points.rows());
    auto fb = fields_at(alg_b, g.points);
    const Eigen::MatrixXd t = prob::traction_values(prob, spec, g);
    for (int c = 0; c < D; ++c) {
      Eigen::VectorXd wt = g.weights.cwiseProduct(t.col(c));
      if (wt.isZero(0.0)) continue;
      ext = A::sadd(ext, col::wsum(fb.u[c].v, wt));
    }
  }
  parts.external = ext;
  parts.total = A::ssub(A::sadd(parts.elastic, parts.thermal), parts.external);
  return parts;
}

// -- field providers -----------------------------------------------------

// Network + transform, via the generic jet forward. P is the parameter
// handle type of the algebra.
template <class A, int D>
fields::FieldJets<col::CV<A>, D> mlp_fields(
    A& alg, const prob::ProblemDef& prob,
    const std::vector<nn::ParamRefs<typename A::P>>& refs,
    const Eigen::MatrixXd& pts) {
  auto x = col::lift_coords<A, D>(alg, pts);
  std::vector<ad::Jet<col::CV<A>, D>> v;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    auto out = nn::mlp_forward<col::CV<A>, typename A::P, D>(
        refs[i], prob.nets[i].activation, std::span(x.data(), D));
    v.insert(v.end(), out.begin(), out.end());
  }
  if constexpr (D == 1) {
    return fields::transform_1d(prob.transform, x[0], v);
  } else {
    return fields::transform_2d(prob.transform, x[0], x[1], v, prob.length);
  }
}

// Reference (or perturbed-reference) fields as constant columns.
template <class A, int D>
fields::FieldJets<col::CV<A>, D> const_fields(A& alg, const ref::RefField& r) {
  fields::FieldJets<col::CV<A>, D> f;
  for (int c = 0; c < D; ++c) {
    f.u[c].v = col::const_col(alg, Eigen::VectorXd(r.u.col(c)));
    for (int i = 0; i < D; ++i)
      f.u[c].d[i] = col::const_col(alg, Eigen::VectorXd(r.grad_u[c].col(i)));
  }
  if (r.has_temp) {
    f.temp.v = col::const_col(alg, r.temp);
    for (int i = 0; i < D; ++i)
      f.temp.d[i] = col::const_col(alg, Eigen::VectorXd(r.grad_temp.col(i)));
    f.has_temp = true;
  }
  return f;
}

// Plain-value loss at a reference solution (analytic or FEM oracle).
LossValues loss_at_reference(const prob::ProblemDef& prob,
                             const mesh::NodeSet& nodes,
                             const ref::ReferenceSolution& sol);

}  // namespace dem::loss
