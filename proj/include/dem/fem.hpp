#pragma once

// Plane-stress thermo-elastic FEM oracle on the L x 3L rectangle: bilinear
// quadrilaterals, per-element material at centroids, direct sparse solves.
// The coupled problem is staggered: conduction first, then elasticity with
// the thermal strain as a load.

#include <Eigen/Core>

#include "dem/problems.hpp"
#include "dem/reference.hpp"

namespace dem::fem {

struct FemSolution {
  int nx = 0, ny = 0;
  double width = 0.0, height = 0.0;
  Eigen::MatrixXd node_xy;        // (nx+1)(ny+1) x 2
  Eigen::MatrixXd u;              // nodes x 2
  Eigen::VectorXd temp;           // nodes (empty when not thermal)
  bool has_temp = false;
  Eigen::MatrixXd nodal_stress;   // nodes x 3, patch-averaged centroid values
  Eigen::MatrixXd nodal_eel;      // nodes x 3 (tensor shear)
  // Reaction force total on the bottom edge (x, y components).
  Eigen::Vector2d bottom_reaction = Eigen::Vector2d::Zero();

  int node_id(int i, int j) const { return j * (nx + 1) + i; }

  // Bilinear interpolation of displacement/temperature, gradients from the
  // element shape functions.
  ref::RefField at(const Eigen::MatrixXd& pts) const;
  // Interpolate any nodal table (e.g. patch-averaged stress) at points.
  Eigen::MatrixXd interp(const Eigen::MatrixXd& nodal,
                         const Eigen::MatrixXd& pts) const;
};

// Solves the given rectangle problem (TwoDFgmElasNeu, TwoDFgmElasDirch or
// TwoDFgmThermoElas, honoring its material and traction data).
FemSolution fem_solve(const prob::ProblemDef& prob, int nx, int ny);

class FemReference : public ref::ReferenceSolution {
 public:
  explicit FemReference(FemSolution sol) : sol_(std::move(sol)) {}
  ref::RefField at(const Eigen::MatrixXd& pts) const override {
    return sol_.at(pts);
  }
  const FemSolution& solution() const { return sol_; }

 private:
  FemSolution sol_;
};

}  // namespace dem::fem
