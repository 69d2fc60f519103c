#pragma once

// Node sets: scattered integration points with weights, plus named boundary
// groups carrying weights and outward unit normals.

#include <Eigen/Core>
#include <string>
#include <vector>

namespace dem::mesh {

struct BoundaryGroup {
  std::string name;
  Eigen::MatrixXd points;   // m x 2 (x2 = 0 for 1d sets)
  Eigen::VectorXd weights;  // boundary measure per node
  Eigen::MatrixXd normals;  // m x 2, unit length
};

struct NodeSet {
  int dim = 1;
  Eigen::MatrixXd points;   // n x 2
  Eigen::VectorXd weights;  // volume measure per node
  std::vector<BoundaryGroup> boundary;

  double measure() const { return weights.sum(); }
  const BoundaryGroup& group(const std::string& name) const;
  bool has_group(const std::string& name) const;
};

// n cell-centered nodes on [0,1] with weights 1/n; boundary groups "left"
// (x=0) and "right" (x=1) with weight 1.
NodeSet uniform_1d(int n);

// Cell-centered grid on [0,L] x [0,3L]; boundary groups "bottom" and "top"
// sampled at the edge cell centers.
NodeSet uniform_grid_2d(int nx, int ny, double length);

// Quarter plate [0,side]^2 with a quarter hole of the given radius at the
// origin. A polar band graded toward the hole is stretched to the outer
// square edge; each node carries the area of its generating cell. Boundary
// groups: "hole", "right", "top", "left", "bottom". `resolution` sets the
// radial cell count (angular count and edge sampling scale with it).
NodeSet plate_with_hole(double radius, double side, int resolution);

// CSV schema: x1,x2,w,group,n1,n2 with group "interior" for domain nodes.
void write_csv(const NodeSet& nodes, const std::string& path);
NodeSet read_csv(const std::string& path);

}  // namespace dem::mesh
