#pragma once

// Loss/gradient evaluation drivers: plain (value only), scalar tape, and
// batched tape. All three assemble the identical functional; the tape
// engines differ only in how the reverse sweep is recorded.

#include <Eigen/Core>
#include <memory>

#include "dem/batch.hpp"
#include "dem/loss.hpp"
#include "dem/problems.hpp"
#include "dem/train_config.hpp"

namespace dem::eng {

struct EvalOut {
  loss::LossValues loss;
  Eigen::VectorXd grad;  // concatenated over nets, nn::flatten order
};

loss::LossValues eval_loss_value(const prob::ProblemDef& prob,
                                 const mesh::NodeSet& nodes,
                                 const std::vector<nn::MlpParams>& params);

EvalOut eval_loss_grad_tape(const prob::ProblemDef& prob,
                            const mesh::NodeSet& nodes,
                            const std::vector<nn::MlpParams>& params);

EvalOut eval_loss_grad_batched(const prob::ProblemDef& prob,
                               const mesh::NodeSet& nodes,
                               const std::vector<nn::MlpParams>& params);

// Persistent batched graph: built once for a (problem, node set) pair, then
// re-evaluated in place each epoch. Eliminates per-epoch graph and buffer
// construction, which dominates otherwise.
class BatchedProgram {
 public:
  BatchedProgram(const prob::ProblemDef& prob, const mesh::NodeSet& nodes);
  BatchedProgram(const BatchedProgram&) = delete;
  BatchedProgram& operator=(const BatchedProgram&) = delete;
  EvalOut eval(const std::vector<nn::MlpParams>& params);

 private:
  template <int D>
  void build(const prob::ProblemDef& prob, const mesh::NodeSet& nodes);

  bt::BatchTape tape_;
  std::vector<bt::BatchNet> nets_;
  loss::LossParts<bt::BVar> parts_{};
};

train::Engine resolve_engine(const prob::ProblemDef& prob, train::Engine e);

EvalOut eval_loss_grad(const prob::ProblemDef& prob,
                       const mesh::NodeSet& nodes,
                       const std::vector<nn::MlpParams>& params,
                       train::Engine engine);

// Predicted fields and autodiff strains/stresses at arbitrary points
// (plain evaluation, no tape).
struct Prediction {
  Eigen::MatrixXd u;       // n x 2
  Eigen::VectorXd temp;    // n
  bool has_temp = false;
  Eigen::MatrixXd eel;     // n x 3 Voigt, tensor shear
  Eigen::MatrixXd stress;  // n x 3
};

Prediction predict(const prob::ProblemDef& prob,
                   const std::vector<nn::MlpParams>& params,
                   const Eigen::MatrixXd& pts);

}  // namespace dem::eng
