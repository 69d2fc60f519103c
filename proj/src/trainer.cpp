#include "dem/trainer.hpp"

#include <cmath>
#include <memory>
#include <numeric>

namespace dem::train {

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
               AdamState& state, const TrainConfig& cfg, double lr) {
  if (state.m.size() != params.size()) {
    state.m = Eigen::VectorXd::Zero(params.size());
    state.v = Eigen::VectorXd::Zero(params.size());
    state.step = 0;
  }
  state.step += 1;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v +
            (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  params -= lr *
            (state.m / c1)
                .cwiseQuotient(((state.v / c2).cwiseSqrt().array() + cfg.eps_hat)
                                   .matrix());
}

std::vector<nn::MlpParams> init_models(const prob::ProblemDef& prob,
                                       std::uint64_t seed) {
  std::vector<nn::MlpParams> params;
  for (std::size_t i = 0; i < prob.nets.size(); ++i) {
    nn::MlpConfig cfg = prob.nets[i];
    cfg.seed = seed + 7919 * i;
    params.push_back(nn::init_params(cfg));
  }
  return params;
}

namespace {

struct Moments {
  double mean = 0.0;
  double stdev = 0.0;
};

Moments moments(const double* data, Eigen::Index n) {
  Moments m;
  if (n == 0) return m;
  for (Eigen::Index i = 0; i < n; ++i) m.mean += data[i];
  m.mean /= static_cast<double>(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = data[i] - m.mean;
    acc += d * d;
  }
  m.stdev = std::sqrt(acc / static_cast<double>(n));
  return m;
}

// Primal-only layer-by-layer forward for activation statistics.
std::vector<Eigen::MatrixXd> hidden_activations(const nn::MlpParams& p,
                                                const nn::MlpConfig& cfg,
                                                const Eigen::MatrixXd& pts) {
  Eigen::MatrixXd h = pts.leftCols(cfg.input_dim);
  std::vector<Eigen::MatrixXd> acts;
  // Output layer is affine; only hidden layers carry activations.
  for (std::size_t l = 0; l + 1 < p.weights.size(); ++l) {
    Eigen::MatrixXd z = h * p.weights[l].transpose();
    z.rowwise() += p.biases[l].transpose();
    switch (cfg.activation) {
      case nn::Activation::Tanh:
        h = z.array().tanh().matrix();
        break;
      case nn::Activation::TanhSq:
        h = z.array().tanh().square().matrix();
        break;
      case nn::Activation::EluSq: {
        h = z.unaryExpr([](double v) {
          const double e = ad::elu(v);
          return e * e;
        });
        break;
      }
    }
    acts.push_back(h);
  }
  return acts;
}

}  // namespace

LayerDiag capture_layer_stats(const prob::ProblemDef& prob,
                              const std::vector<nn::MlpParams>& params,
                              const mesh::NodeSet& nodes,
                              const Eigen::VectorXd& grad, int epoch) {
  LayerDiag d;
  d.epoch = epoch;
  Eigen::Index g = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto acts = hidden_activations(params[i], prob.nets[i], nodes.points);
    for (const auto& a : acts) {
      const Moments m = moments(a.data(), a.size());
      d.act_mean.push_back(m.mean);
      d.act_std.push_back(m.stdev);
    }
    for (std::size_t l = 0; l < params[i].weights.size(); ++l) {
      const auto& w = params[i].weights[l];
      const auto& b = params[i].biases[l];
      Moments mw = moments(w.data(), w.size());
      Moments mb = moments(b.data(), b.size());
      d.w_mean.push_back(mw.mean);
      d.w_std.push_back(mw.stdev);
      d.b_mean.push_back(mb.mean);
      d.b_std.push_back(mb.stdev);
      if (grad.size() > 0) {
        Moments gw = moments(grad.data() + g, w.size());
        g += w.size();
        Moments gb = moments(grad.data() + g, b.size());
        g += b.size();
        d.gw_mean.push_back(gw.mean);
        d.gw_std.push_back(gw.stdev);
        d.gb_mean.push_back(gb.mean);
        d.gb_std.push_back(gb.stdev);
      }
    }
  }
  return d;
}

namespace {

Eigen::VectorXd flatten_all(const std::vector<nn::MlpParams>& params) {
  std::size_t total = 0;
  for (const auto& p : params) total += p.count();
  Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
  Eigen::Index k = 0;
  for (const auto& p : params) {
    const Eigen::VectorXd f = nn::flatten(p);
    flat.segment(k, f.size()) = f;
    k += f.size();
  }
  return flat;
}

void unflatten_all(const Eigen::VectorXd& flat,
                   std::vector<nn::MlpParams>& params) {
  Eigen::Index k = 0;
  for (auto& p : params) {
    const auto n = static_cast<Eigen::Index>(p.count());
    Eigen::VectorXd seg = flat.segment(k, n);
    nn::unflatten(seg, p);
    k += n;
  }
}

}  // namespace

TrainResult train(const prob::ProblemDef& prob, const mesh::NodeSet& nodes,
                  const TrainConfig& cfg,
                  const CheckpointFn& on_checkpoint) {
  TrainResult out;
  out.params = init_models(prob, cfg.seed);
  if (cfg.epochs <= 0) return out;

  Eigen::VectorXd flat = flatten_all(out.params);
  AdamState adam;
  std::vector<double> smoothed;
  double running = 0.0;

  const train::Engine engine = eng::resolve_engine(prob, cfg.engine);
  std::unique_ptr<eng::BatchedProgram> program;
  if (engine == Engine::Batched)
    program = std::make_unique<eng::BatchedProgram>(prob, nodes);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const eng::EvalOut ev = program
                                ? program->eval(out.params)
                                : eng::eval_loss_grad_tape(prob, nodes,
                                                           out.params);
    out.trace.history.push_back(ev.loss);
    if (!std::isfinite(ev.loss.total))
      throw NumericalError("training aborted: non-finite loss at epoch " +
                           std::to_string(epoch));

    if (cfg.diag_every > 0 &&
        (epoch % cfg.diag_every == 0 || epoch == cfg.epochs - 1)) {
      out.trace.diagnostics.push_back(
          capture_layer_stats(prob, out.params, nodes, ev.grad, epoch));
    }
    if (on_checkpoint && cfg.checkpoint_every > 0 &&
        epoch % cfg.checkpoint_every == 0) {
      on_checkpoint(epoch, out.params);
    }

    double lr = cfg.learning_rate;
    if (cfg.decay_every > 0)
      lr *= std::pow(cfg.decay_factor, epoch / cfg.decay_every);
    adam_step(flat, ev.grad, adam, cfg, lr);
    unflatten_all(flat, out.params);
    out.trace.epochs_run = epoch + 1;

    // Stop when the smoothed loss has moved less than rel_tol (relative)
    // across the whole trailing window. The range, not a two-point
    // difference, so optimizer noise cannot trigger it early.
    running += ev.loss.total;
    const int span = std::max(1, cfg.smooth_span);
    if (static_cast<int>(out.trace.history.size()) > span)
      running -= out.trace.history[out.trace.history.size() - 1 - span].total;
    const int have = std::min<int>(span, out.trace.history.size());
    smoothed.push_back(running / have);
    if (cfg.window > 0 && static_cast<int>(smoothed.size()) > cfg.window) {
      double lo = smoothed.back(), hi = smoothed.back();
      for (std::size_t i = smoothed.size() - cfg.window; i < smoothed.size();
           ++i) {
        lo = std::min(lo, smoothed[i]);
        hi = std::max(hi, smoothed[i]);
      }
      if (hi - lo < cfg.rel_tol * std::max(1.0, std::abs(smoothed.back()))) {
        out.trace.converged_early = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace dem::train
