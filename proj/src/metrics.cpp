#include "dem/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dem::metrics {

double r2(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
  if (truth.size() != pred.size())
    throw std::invalid_argument("r2: length mismatch");
  if (truth.size() < 2) throw std::invalid_argument("r2: need >= 2 samples");
  const double mean = truth.mean();
  const double ss_res = (truth - pred).squaredNorm();
  const double ss_tot = (truth.array() - mean).matrix().squaredNorm();
  if (ss_tot == 0.0)
    return ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - ss_res / ss_tot;
}

bool low_variance_flag(const Eigen::VectorXd& truth) {
  const double mean = truth.mean();
  const double var =
      (truth.array() - mean).square().sum() / static_cast<double>(truth.size());
  return var < 1e-8 * mean * mean + 1e-12;
}

ScoreReport score_variable(const std::string& name,
                           const Eigen::VectorXd& truth,
                           const Eigen::VectorXd& pred) {
  ScoreReport s;
  s.variable = name;
  s.r2 = r2(truth, pred);
  s.mse = (truth - pred).squaredNorm() / static_cast<double>(truth.size());
  s.max_abs_err = (truth - pred).cwiseAbs().maxCoeff();
  const double mean = truth.mean();
  s.ref_variance =
      (truth.array() - mean).square().sum() / static_cast<double>(truth.size());
  s.low_variance = low_variance_flag(truth);
  return s;
}

const ScoreReport& SolutionReport::score(const std::string& variable) const {
  for (const auto& s : scores)
    if (s.variable == variable) return s;
  throw std::out_of_range("no score for variable: " + variable);
}

bool SolutionReport::has(const std::string& variable) const {
  for (const auto& s : scores)
    if (s.variable == variable) return true;
  return false;
}

std::vector<std::string> problem_variables(const prob::ProblemDef& prob) {
  std::vector<std::string> v;
  if (prob.dim == 1) {
    v = {"u1", "sigma11", "eps11"};
  } else {
    v = {"u1", "u2", "sigma11", "sigma12", "sigma22", "eps11", "eps12", "eps22"};
  }
  if (prob.thermal) v.push_back("T");
  return v;
}

SolutionReport score_problem(const prob::ProblemDef& prob,
                             const mesh::NodeSet& nodes,
                             const eng::Prediction& pred,
                             const ref::ReferenceField& reference) {
  if (reference.points.rows() != nodes.points.rows())
    throw std::invalid_argument("score_problem: node set mismatch");

  // Hole problems compare only near the hole, where the infinite-plate
  // reference is meaningful.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < nodes.points.rows(); ++i) {
    if (prob.code == prob::ProblemCode::Kirsch &&
        nodes.points.row(i).norm() > prob.score_radius)
      continue;
    keep.push_back(i);
  }

  auto mask = [&](const Eigen::VectorXd& full) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      out[static_cast<Eigen::Index>(i)] = full[keep[i]];
    return out;
  };

  SolutionReport rep;
  rep.variables = problem_variables(prob);
  rep.points.resize(static_cast<Eigen::Index>(keep.size()), 2);
  for (std::size_t i = 0; i < keep.size(); ++i)
    rep.points.row(static_cast<Eigen::Index>(i)) = nodes.points.row(keep[i]);

  for (const auto& var : rep.variables) {
    Eigen::VectorXd p, r;
    if (var == "u1") {
      p = pred.u.col(0);
      r = reference.u.col(0);
    } else if (var == "u2") {
      p = pred.u.col(1);
      r = reference.u.col(1);
    } else if (var == "T") {
      p = pred.temp;
      r = reference.temp;
    } else if (var == "sigma11") {
      p = pred.stress.col(0);
      r = reference.stress.col(0);
    } else if (var == "sigma22") {
      p = pred.stress.col(1);
      r = reference.stress.col(1);
    } else if (var == "sigma12") {
      p = pred.stress.col(2);
      r = reference.stress.col(2);
    } else if (var == "eps11") {
      p = pred.eel.col(0);
      r = reference.eel.col(0);
    } else if (var == "eps22") {
      p = pred.eel.col(1);
      r = reference.eel.col(1);
    } else if (var == "eps12") {
      p = pred.eel.col(2);
      r = reference.eel.col(2);
    } else {
      throw std::logic_error("score_problem: unknown variable " + var);
    }
    rep.predicted.push_back(mask(p));
    rep.reference.push_back(mask(r));
    rep.scores.push_back(
        score_variable(var, rep.reference.back(), rep.predicted.back()));
  }
  return rep;
}

}  // namespace dem::metrics
