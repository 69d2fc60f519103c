#pragma once

// Full-batch Adam over the energy loss, with divergence guard, smoothed
// convergence stopping, and per-layer diagnostic capture.

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dem/engines.hpp"
#include "dem/loss.hpp"
#include "dem/problems.hpp"
#include "dem/train_config.hpp"

namespace dem::train {

// Loss became non-finite; surfaced as exit code 3 by the CLI.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
};

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
               AdamState& state, const TrainConfig& cfg, double lr);

struct LayerDiag {
  int epoch = 0;
  // One entry per hidden layer (net-major order).
  std::vector<double> act_mean, act_std;
  // One entry per weight layer (net-major order).
  std::vector<double> w_mean, w_std, b_mean, b_std;
  std::vector<double> gw_mean, gw_std, gb_mean, gb_std;
};

struct TrainingTrace {
  std::vector<loss::LossValues> history;
  std::vector<LayerDiag> diagnostics;
  int epochs_run = 0;
  bool converged_early = false;
};

struct TrainResult {
  std::vector<nn::MlpParams> params;
  TrainingTrace trace;
};

using CheckpointFn =
    std::function<void(int epoch, const std::vector<nn::MlpParams>&)>;

std::vector<nn::MlpParams> init_models(const prob::ProblemDef& prob,
                                       std::uint64_t seed);

// Hidden activation statistics plus weight/bias/gradient statistics; the
// gradient vector is in nn::flatten order (concatenated over nets).
LayerDiag capture_layer_stats(const prob::ProblemDef& prob,
                              const std::vector<nn::MlpParams>& params,
                              const mesh::NodeSet& nodes,
                              const Eigen::VectorXd& grad, int epoch);

TrainResult train(const prob::ProblemDef& prob, const mesh::NodeSet& nodes,
                  const TrainConfig& cfg,
                  const CheckpointFn& on_checkpoint = nullptr);

}  // namespace dem::train
