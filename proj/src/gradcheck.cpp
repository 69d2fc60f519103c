#include "dem/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "dem/engines.hpp"
#include "dem/trainer.hpp"

namespace dem::check {

prob::ProblemDef reduced_problem(prob::ProblemCode code) {
  prob::ProblemDef p = prob::make_problem(code);
  for (auto& net : p.nets)
    for (auto& w : net.hidden) w = std::min(w, 8);
  p.sampling.n_1d = 20;
  p.sampling.nx = 5;
  p.sampling.ny = 9;
  p.sampling.plate_resolution = 6;
  return p;
}

namespace {

double rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double abs_err = std::abs(a[i] - b[i]);
    if (abs_err <= 1e-8) continue;  // absolute floor near zero
    worst = std::max(
        worst, abs_err / std::max({std::abs(a[i]), std::abs(b[i]), 1e-30}));
  }
  return worst;
}

}  // namespace

GradCheckResult gradcheck(prob::ProblemCode code, int n_seeds, double tol) {
  prob::ProblemDef p = reduced_problem(code);
  const mesh::NodeSet nodes = prob::build_nodes(p);
  GradCheckResult result;

  for (int seed = 1; seed <= n_seeds; ++seed) {
    std::vector<nn::MlpParams> params =
        train::init_models(p, static_cast<std::uint64_t>(seed));
    std::size_t total = 0;
    for (const auto& q : params) total += q.count();

    // Plain-value loss as a function of the flat parameter vector.
    auto loss_of = [&](const Eigen::VectorXd& flat) {
      std::vector<nn::MlpParams> q = params;
      Eigen::Index k = 0;
      for (auto& net : q) {
        const auto n = static_cast<Eigen::Index>(net.count());
        Eigen::VectorXd seg = flat.segment(k, n);
        nn::unflatten(seg, net);
        k += n;
      }
      return eng::eval_loss_value(p, nodes, q).total;
    };

    Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
    {
      Eigen::Index k = 0;
      for (const auto& q : params) {
        const Eigen::VectorXd f = nn::flatten(q);
        flat.segment(k, f.size()) = f;
        k += f.size();
      }
    }

    const double h = 1e-6;
    Eigen::VectorXd fd(flat.size());
    Eigen::VectorXd xp = flat;
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
      const double xi = xp[i];
      xp[i] = xi + h;
      const double fp = loss_of(xp);
      xp[i] = xi - h;
      const double fm = loss_of(xp);
      xp[i] = xi;
      fd[i] = (fp - fm) / (2.0 * h);
    }

    const eng::EvalOut tape = eng::eval_loss_grad_tape(p, nodes, params);
    const eng::EvalOut batched = eng::eval_loss_grad_batched(p, nodes, params);
    result.max_rel_tape = std::max(result.max_rel_tape, rel_error(tape.grad, fd));
    result.max_rel_batched =
        std::max(result.max_rel_batched, rel_error(batched.grad, fd));
  }
  result.pass = result.max_rel_tape <= tol && result.max_rel_batched <= tol;
  return result;
}

}  // namespace dem::check
