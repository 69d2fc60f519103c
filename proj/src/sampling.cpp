#include "dem/sampling.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dem::mesh {

const BoundaryGroup& NodeSet::group(const std::string& name) const {
  for (const auto& g : boundary)
    if (g.name == name) return g;
  throw std::out_of_range("node set has no boundary group: " + name);
}

bool NodeSet::has_group(const std::string& name) const {
  for (const auto& g : boundary)
    if (g.name == name) return true;
  return false;
}

namespace {

BoundaryGroup point_group(const std::string& name, double x, double nx) {
  BoundaryGroup g;
  g.name = name;
  g.points = Eigen::MatrixXd::Zero(1, 2);
  g.points(0, 0) = x;
  g.weights = Eigen::VectorXd::Ones(1);
  g.normals = Eigen::MatrixXd::Zero(1, 2);
  g.normals(0, 0) = nx;
  return g;
}

// Cell-centered samples along a straight edge.
BoundaryGroup edge_group(const std::string& name, Eigen::Vector2d a,
                         Eigen::Vector2d b, int n, Eigen::Vector2d normal) {
  BoundaryGroup g;
  g.name = name;
  g.points.resize(n, 2);
  g.weights.resize(n);
  g.normals.resize(n, 2);
  const double len = (b - a).norm();
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    g.points.row(i) = (a + t * (b - a)).transpose();
    g.weights[i] = len / n;
    g.normals.row(i) = normal.transpose();
  }
  return g;
}

}  // namespace

NodeSet uniform_1d(int n) {
  if (n < 2) throw std::invalid_argument("uniform_1d: need n >= 2");
  NodeSet s;
  s.dim = 1;
  s.points = Eigen::MatrixXd::Zero(n, 2);
  s.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int i = 0; i < n; ++i) s.points(i, 0) = (i + 0.5) / n;
  s.boundary.push_back(point_group("left", 0.0, -1.0));
  s.boundary.push_back(point_group("right", 1.0, 1.0));
  return s;
}

NodeSet uniform_grid_2d(int nx, int ny, double length) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("uniform_grid_2d: need nx, ny >= 2");
  const double width = length;
  const double height = 3.0 * length;
  NodeSet s;
  s.dim = 2;
  s.points.resize(nx * ny, 2);
  s.weights = Eigen::VectorXd::Constant(nx * ny, (width / nx) * (height / ny));
  int k = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i, ++k) {
      s.points(k, 0) = (i + 0.5) * width / nx;
      s.points(k, 1) = (j + 0.5) * height / ny;
    }
  s.boundary.push_back(edge_group("bottom", {0.0, 0.0}, {width, 0.0}, nx,
                                  {0.0, -1.0}));
  s.boundary.push_back(
      edge_group("top", {0.0, height}, {width, height}, nx, {0.0, 1.0}));
  return s;
}

NodeSet plate_with_hole(double radius, double side, int resolution) {
  if (!(radius > 0.0) || radius >= side)
    throw std::invalid_argument("plate_with_hole: need 0 < radius < side");
  if (resolution < 4)
    throw std::invalid_argument("plate_with_hole: resolution too small");

  const int n_r = resolution;
  const int n_theta = (resolution * 8) / 5;
  const double grading = 1.6;  // clusters radial cells toward the hole
  const double dth = std::numbers::pi / 2.0 / n_theta;

  // Distance from the origin to the outer square edge along angle theta.
  auto outer = [&](double th) {
    return side / std::max(std::cos(th), std::sin(th));
  };

  NodeSet s;
  s.dim = 2;
  s.points.resize(n_r * n_theta, 2);
  s.weights.resize(n_r * n_theta);
  int k = 0;
  for (int j = 0; j < n_theta; ++j) {
    const double thc = (j + 0.5) * dth;
    const double rmax = outer(thc);
    for (int i = 0; i < n_r; ++i, ++k) {
      const double t0 = std::pow(static_cast<double>(i) / n_r, grading);
      const double t1 = std::pow(static_cast<double>(i + 1) / n_r, grading);
      const double r0 = radius + t0 * (rmax - radius);
      const double r1 = radius + t1 * (rmax - radius);
      const double rc = 0.5 * (r0 + r1);
      s.points(k, 0) = rc * std::cos(thc);
      s.points(k, 1) = rc * std::sin(thc);
      s.weights[k] = 0.5 * (r1 * r1 - r0 * r0) * dth;
    }
  }

  // Hole arc: outward normal of the material points toward the center.
  const int n_arc = n_theta;
  BoundaryGroup hole;
  hole.name = "hole";
  hole.points.resize(n_arc, 2);
  hole.weights.resize(n_arc);
  hole.normals.resize(n_arc, 2);
  for (int j = 0; j < n_arc; ++j) {
    const double th = (j + 0.5) * dth;
    hole.points(j, 0) = radius * std::cos(th);
    hole.points(j, 1) = radius * std::sin(th);
    hole.weights[j] = radius * dth;
    hole.normals(j, 0) = -std::cos(th);
    hole.normals(j, 1) = -std::sin(th);
  }
  s.boundary.push_back(std::move(hole));

  const int n_edge = std::max(8, resolution);
  s.boundary.push_back(edge_group("right", {side, 0.0}, {side, side}, n_edge,
                                  {1.0, 0.0}));
  s.boundary.push_back(
      edge_group("top", {0.0, side}, {side, side}, n_edge, {0.0, 1.0}));
  s.boundary.push_back(
      edge_group("left", {0.0, radius}, {0.0, side}, n_edge, {-1.0, 0.0}));
  s.boundary.push_back(edge_group("bottom", {radius, 0.0}, {side, 0.0},
                                  n_edge, {0.0, -1.0}));
  return s;
}

void write_csv(const NodeSet& nodes, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  out << "x1,x2,w,group,n1,n2\n";
  for (Eigen::Index i = 0; i < nodes.points.rows(); ++i)
    out << nodes.points(i, 0) << ',' << nodes.points(i, 1) << ','
        << nodes.weights[i] << ",interior,0,0\n";
  for (const auto& g : nodes.boundary)
    for (Eigen::Index i = 0; i < g.points.rows(); ++i)
      out << g.points(i, 0) << ',' << g.points(i, 1) << ',' << g.weights[i]
          << ',' << g.name << ',' << g.normals(i, 0) << ',' << g.normals(i, 1)
          << '\n';
}

NodeSet read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::getline(in, line);  // header
  struct Row {
    double x1, x2, w, n1, n2;
  };
  std::vector<Row> interior;
  std::map<std::string, std::vector<Row>> groups;
  std::vector<std::string> group_order;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Row r{};
    std::string name;
    std::getline(ss, cell, ',');
    r.x1 = std::stod(cell);
    std::getline(ss, cell, ',');
    r.x2 = std::stod(cell);
    std::getline(ss, cell, ',');
    r.w = std::stod(cell);
    std::getline(ss, name, ',');
    std::getline(ss, cell, ',');
    r.n1 = std::stod(cell);
    std::getline(ss, cell, ',');
    r.n2 = std::stod(cell);
    if (name == "interior") {
      interior.push_back(r);
    } else {
      if (!groups.count(name)) group_order.push_back(name);
      groups[name].push_back(r);
    }
  }
  NodeSet s;
  s.points.resize(interior.size(), 2);
  s.weights.resize(interior.size());
  bool any_x2 = false;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    s.points(static_cast<Eigen::Index>(i), 0) = interior[i].x1;
    s.points(static_cast<Eigen::Index>(i), 1) = interior[i].x2;
    s.weights[static_cast<Eigen::Index>(i)] = interior[i].w;
    any_x2 = any_x2 || interior[i].x2 != 0.0;
  }
  s.dim = any_x2 ? 2 : 1;
  for (const auto& name : group_order) {
    const auto& rows = groups[name];
    BoundaryGroup g;
    g.name = name;
    g.points.resize(rows.size(), 2);
    g.weights.resize(rows.size());
    g.normals.resize(rows.size(), 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      g.points(e, 0) = rows[i].x1;
      g.points(e, 1) = rows[i].x2;
      g.weights[e] = rows[i].w;
      g.normals(e, 0) = rows[i].n1;
      g.normals(e, 1) = rows[i].n2;
    }
    s.boundary.push_back(std::move(g));
  }
  return s;
}

}  // namespace dem::mesh
