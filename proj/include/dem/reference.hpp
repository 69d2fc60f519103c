#pragma once

// Ground-truth generators: closed-form solutions for the 1d problems and
// the plate-with-hole problem, plus a common sampled-field interface that
// the FEM oracle also implements.

#include <Eigen/Core>
#include <array>
#include <memory>
#include <string>

#include "dem/problems.hpp"

namespace dem::ref {

// Pointwise closed-form 1d solution data.
struct Line1d {
  double u = 0.0;
  double du = 0.0;
  double temp = 0.0;
  double dtemp = 0.0;
  double stress = 0.0;   // equals E * elastic strain
  double eel = 0.0;      // elastic strain (du - thermal part)
  bool has_temp = false;
};

Line1d analytic_1d(prob::ProblemCode code, double x);

// Classical infinite-plate hole solution under far-field uniaxial tension,
// plane stress, mapped to Cartesian components.
struct KirschField {
  Eigen::Vector2d u;
  Eigen::Vector3d stress;  // Voigt (s11, s22, s12)
  Eigen::Vector3d eel;     // Voigt tensor-shear strain
};

KirschField kirsch_analytic(const Eigen::Vector2d& x, double far_stress,
                            double radius, double youngs, double poisson);

// Fields plus gradients sampled at arbitrary points; implemented by the
// analytic solutions and by the FEM oracle.
struct RefField {
  Eigen::MatrixXd u;                      // n x 2 (column 0 in 1d)
  std::array<Eigen::MatrixXd, 2> grad_u;  // grad_u[c](i,j) = d u_c / d x_j
  Eigen::VectorXd temp;
  Eigen::MatrixXd grad_temp;              // n x 2
  bool has_temp = false;
};

class ReferenceSolution {
 public:
  virtual ~ReferenceSolution() = default;
  virtual RefField at(const Eigen::MatrixXd& pts) const = 0;
};

// Per-node reference values in the shape the scorer consumes.
struct ReferenceField {
  std::string provenance;  // "analytical" or "fem-oracle"
  Eigen::MatrixXd points;
  Eigen::MatrixXd u;       // n x 2
  Eigen::VectorXd temp;
  bool has_temp = false;
  Eigen::MatrixXd eel;     // n x 3 Voigt (1d uses column 0)
  Eigen::MatrixXd stress;  // n x 3
};

// Oracle dispatch for a problem; FEM resolution applies to Fem oracles.
std::unique_ptr<ReferenceSolution> make_reference(const prob::ProblemDef& p,
                                                  int fem_nx = 40,
                                                  int fem_ny = 120);

ReferenceField reference_at_nodes(const prob::ProblemDef& p,
                                  const mesh::NodeSet& nodes, int fem_nx = 40,
                                  int fem_ny = 120);

}  // namespace dem::ref
