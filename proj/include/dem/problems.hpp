#pragma once

// Registry of the eight benchmark boundary-value problems. Each code binds
// together geometry, material functions, loads, the admissibility
// transform, the network architecture, the reference oracle, and training
// defaults.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dem/mlp.hpp"
#include "dem/physics.hpp"
#include "dem/sampling.hpp"
#include "dem/train_config.hpp"
#include "dem/transforms.hpp"

namespace dem::prob {

enum class ProblemCode {
  OneDFgmElasDirch,
  OneDFgmElasNeu,
  OneDElasBf,
  OneDFgmThermoElas,
  Kirsch,
  TwoDFgmElasNeu,
  TwoDFgmElasDirch,
  TwoDFgmThermoElas,
};

std::string to_string(ProblemCode code);
ProblemCode code_from_string(const std::string& name);
std::vector<ProblemCode> all_codes();

enum class OracleKind { Analytic1d, KirschPlate, Fem };

struct TractionSpec {
  std::string group;
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  // When set, traction is evaluated from the classical hole solution at
  // each boundary node instead of using `value`.
  bool analytic_kirsch = false;
};

struct SamplingSpec {
  int n_1d = 50;
  int nx = 30;
  int ny = 90;
  int plate_resolution = 50;
};

struct ProblemDef {
  ProblemCode code{};
  std::string name;
  int dim = 1;
  bool thermal = false;
  fields::TransformId transform{};
  std::vector<nn::MlpConfig> nets;
  phys::MaterialModel material;

  bool has_body_force = false;
  Eigen::Vector2d body_force = Eigen::Vector2d::Zero();
  std::vector<TractionSpec> tractions;

  double length = 1.0;      // rectangle width L (height is 3L)
  double hole_radius = 0.1;
  double plate_side = 0.5;
  double far_stress = 1.0;
  double score_radius = 0.3;  // hole problems: R^2 restricted to r <= this

  SamplingSpec sampling;
  train::TrainConfig train;
  OracleKind oracle{};
};

ProblemDef make_problem(ProblemCode code);

mesh::NodeSet build_nodes(const ProblemDef& prob);

// Traction vectors evaluated at the nodes of a boundary group.
Eigen::MatrixXd traction_values(const ProblemDef& prob,
                                const TractionSpec& spec,
                                const mesh::BoundaryGroup& group);

}  // namespace dem::prob
