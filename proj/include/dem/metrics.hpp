#pragma once

// Accuracy scoring against a reference field: coefficient of determination
// per variable plus supplementary error norms. A low-variance flag marks
// near-constant references whose R^2 is uninformative.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dem/engines.hpp"
#include "dem/problems.hpp"
#include "dem/reference.hpp"

namespace dem::metrics {

struct ScoreReport {
  std::string variable;
  double r2 = 0.0;
  double mse = 0.0;
  double max_abs_err = 0.0;
  double ref_variance = 0.0;
  bool low_variance = false;
};

// 1 - SS_res / SS_tot. Throws on length mismatch or fewer than 2 samples.
double r2(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred);

bool low_variance_flag(const Eigen::VectorXd& truth);

ScoreReport score_variable(const std::string& name,
                           const Eigen::VectorXd& truth,
                           const Eigen::VectorXd& pred);

struct SolutionReport {
  std::vector<std::string> variables;
  Eigen::MatrixXd points;  // scored nodes (after any comparison mask)
  std::vector<Eigen::VectorXd> predicted;
  std::vector<Eigen::VectorXd> reference;
  std::vector<ScoreReport> scores;

  const ScoreReport& score(const std::string& variable) const;
  bool has(const std::string& variable) const;
};

// Variables reported for a problem, in output order.
std::vector<std::string> problem_variables(const prob::ProblemDef& prob);

SolutionReport score_problem(const prob::ProblemDef& prob,
                             const mesh::NodeSet& nodes,
                             const eng::Prediction& pred,
                             const ref::ReferenceField& reference);

}  // namespace dem::metrics
