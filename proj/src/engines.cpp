#include "dem/engines.hpp"

#include <stdexcept>

#include "dem/batch.hpp"

namespace dem::eng {

namespace {

template <int D>
loss::LossValues plain_loss(const prob::ProblemDef& prob,
                            const mesh::NodeSet& nodes,
                            const std::vector<nn::MlpParams>& params) {
  std::vector<nn::ParamRefs<double>> refs;
  refs.reserve(params.size());
  for (const auto& p : params) refs.push_back(nn::make_param_refs(p));
  auto factory = [](Eigen::Index rows) { return col::PlainAlg{rows}; };
  auto fields = [&](col::PlainAlg& alg, const Eigen::MatrixXd& pts) {
    return loss::mlp_fields<col::PlainAlg, D>(alg, prob, refs, pts);
  };
  auto parts = loss::assemble_loss<D>(factory, prob, nodes, fields);
  return loss::values_of<col::PlainAlg>(parts);
}

template <int D>
EvalOut tape_loss(const prob::ProblemDef& prob, const mesh::NodeSet& nodes,
                  const std::vector<nn::MlpParams>& params) {
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  std::vector<nn::ParamRefs<ad::Var>> refs;
  refs.reserve(params.size());
  for (const auto& p : params) refs.push_back(nn::lift_params(tape, p, &leaves));

  auto factory = [&](Eigen::Index rows) { return col::TapeAlg{&tape, rows}; };
  auto fields = [&](col::TapeAlg& alg, const Eigen::MatrixXd& pts) {
    return loss::mlp_fields<col::TapeAlg, D>(alg, prob, refs, pts);
  };
  auto parts = loss::assemble_loss<D>(factory, prob, nodes, fields);
  tape.reverse(parts.total);

  EvalOut out;
  out.loss = loss::values_of<col::TapeAlg>(parts);
  out.grad.resize(static_cast<Eigen::Index>(leaves.size()));
  for (std::size_t i = 0; i < leaves.size(); ++i)
    out.grad[static_cast<Eigen::Index>(i)] = tape.adjoint(leaves[i]);
  return out;
}

}  // namespace

template <int D>
void BatchedProgram::build(const prob::ProblemDef& prob,
                           const mesh::NodeSet& nodes) {
  const std::vector<nn::MlpParams> init = [&] {
    std::vector<nn::MlpParams> p;
    for (const auto& cfg : prob.nets) p.push_back(nn::init_params(cfg));
    return p;
  }();
  nets_.reserve(init.size());
  for (const auto& p : init) nets_.push_back(bt::register_net(tape_, p));

  auto factory = [&](Eigen::Index rows) {
    return bt::BatchAlg{&tape_, rows};
  };
  auto fields = [&](bt::BatchAlg& alg, const Eigen::MatrixXd& pts) {
    auto x = col::lift_coords<bt::BatchAlg, D>(alg, pts);
    std::vector<ad::Jet<col::CV<bt::BatchAlg>, D>> v;
    for (std::size_t i = 0; i < nets_.size(); ++i) {
      auto out = bt::forward_batched<D>(alg, nets_[i], prob.nets[i], pts);
      v.insert(v.end(), out.begin(), out.end());
    }
    if constexpr (D == 1) {
      return fields::transform_1d(prob.transform, x[0], v);
    } else {
      return fields::transform_2d(prob.transform, x[0], x[1], v, prob.length);
    }
  };
  parts_ = loss::assemble_loss<D>(factory, prob, nodes, fields);
}

BatchedProgram::BatchedProgram(const prob::ProblemDef& prob,
                               const mesh::NodeSet& nodes) {
  if (prob.dim == 1) {
    build<1>(prob, nodes);
  } else {
    build<2>(prob, nodes);
  }
}

EvalOut BatchedProgram::eval(const std::vector<nn::MlpParams>& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t l = 0; l < params[i].weights.size(); ++l) {
      tape_.set_param(nets_[i].w_nodes[l], params[i].weights[l]);
      tape_.set_param(nets_[i].b_nodes[l], params[i].biases[l]);
    }
  }
  tape_.recompute();
  tape_.reverse(parts_.total.id);

  EvalOut out;
  out.loss = loss::values_of<bt::BatchAlg>(parts_);
  std::size_t total = 0;
  std::vector<Eigen::VectorXd> grads;
  for (const auto& net : nets_) {
    grads.push_back(bt::net_gradient(tape_, net));
    total += static_cast<std::size_t>(grads.back().size());
  }
  out.grad.resize(static_cast<Eigen::Index>(total));
  Eigen::Index k = 0;
  for (const auto& g : grads) {
    out.grad.segment(k, g.size()) = g;
    k += g.size();
  }
  return out;
}

loss::LossValues eval_loss_value(const prob::ProblemDef& prob,
                                 const mesh::NodeSet& nodes,
                                 const std::vector<nn::MlpParams>& params) {
  return prob.dim == 1 ? plain_loss<1>(prob, nodes, params)
                       : plain_loss<2>(prob, nodes, params);
}

EvalOut eval_loss_grad_tape(const prob::ProblemDef& prob,
                            const mesh::NodeSet& nodes,
                            const std::vector<nn::MlpParams>& params) {
  return prob.dim == 1 ? tape_loss<1>(prob, nodes, params)
                       : tape_loss<2>(prob, nodes, params);
}

EvalOut eval_loss_grad_batched(const prob::ProblemDef& prob,
                               const mesh::NodeSet& nodes,
                               const std::vector<nn::MlpParams>& params) {
  BatchedProgram program(prob, nodes);
  return program.eval(params);
}

train::Engine resolve_engine(const prob::ProblemDef& prob, train::Engine e) {
  if (e != train::Engine::Auto) return e;
  // Scalar tape for the small 1d nets; matrix tape for the wide 2d ones.
  return prob.dim == 1 ? train::Engine::Tape : train::Engine::Batched;
}

EvalOut eval_loss_grad(const prob::ProblemDef& prob,
                       const mesh::NodeSet& nodes,
                       const std::vector<nn::MlpParams>& params,
                       train::Engine engine) {
  switch (resolve_engine(prob, engine)) {
    case train::Engine::Tape:
      return eval_loss_grad_tape(prob, nodes, params);
    case train::Engine::Batched:
      return eval_loss_grad_batched(prob, nodes, params);
    default:
      throw std::logic_error("eval_loss_grad: unresolved engine");
  }
}

namespace {

template <int D>
Prediction predict_impl(const prob::ProblemDef& prob,
                        const std::vector<nn::MlpParams>& params,
                        const Eigen::MatrixXd& pts) {
  std::vector<nn::ParamRefs<double>> refs;
  refs.reserve(params.size());
  for (const auto& p : params) refs.push_back(nn::make_param_refs(p));
  col::PlainAlg alg{pts.rows()};
  auto f = loss::mlp_fields<col::PlainAlg, D>(alg, prob, refs, pts);

  const Eigen::Index n = pts.rows();
  Prediction out;
  out.u = Eigen::MatrixXd::Zero(n, 2);
  out.temp = Eigen::VectorXd::Zero(n);
  out.eel = Eigen::MatrixXd::Zero(n, 3);
  out.stress = Eigen::MatrixXd::Zero(n, 3);
  out.has_temp = f.has_temp;

  for (int c = 0; c < D; ++c) out.u.col(c) = f.u[c].v.h.matrix();
  if (f.has_temp) out.temp = f.temp.v.h.matrix();

  const Eigen::VectorXd e_vec = prob.material.youngs_at(pts);
  Eigen::ArrayXd th = Eigen::ArrayXd::Zero(n);
  if (f.has_temp && prob.material.alpha != 0.0)
    th = prob.material.alpha * (f.temp.v.h - prob.material.t_ref);

  if constexpr (D == 1) {
    const Eigen::ArrayXd eel = f.u[0].d[0].h - th;
    out.eel.col(0) = eel.matrix();
    out.stress.col(0) = (eel * e_vec.array()).matrix();
  } else {
    const Eigen::ArrayXd e11 = f.u[0].d[0].h - th;
    const Eigen::ArrayXd e22 = f.u[1].d[1].h - th;
    const Eigen::ArrayXd e12 = 0.5 * (f.u[0].d[1].h + f.u[1].d[0].h);
    out.eel.col(0) = e11.matrix();
    out.eel.col(1) = e22.matrix();
    out.eel.col(2) = e12.matrix();
    const double nu = prob.material.poisson;
    const double a = 1.0 / (1.0 - nu * nu);
    out.stress.col(0) = ((e11 + nu * e22) * e_vec.array() * a).matrix();
    out.stress.col(1) = ((e22 + nu * e11) * e_vec.array() * a).matrix();
    out.stress.col(2) = (e12 * e_vec.array() * (1.0 / (1.0 + nu))).matrix();
  }
  return out;
}

}  // namespace

Prediction predict(const prob::ProblemDef& prob,
                   const std::vector<nn::MlpParams>& params,
                   const Eigen::MatrixXd& pts) {
  return prob.dim == 1 ? predict_impl<1>(prob, params, pts)
                       : predict_impl<2>(prob, params, pts);
}

}  // namespace dem::eng
