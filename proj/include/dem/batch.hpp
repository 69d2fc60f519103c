#pragma once

// Reverse-mode tape over batched matrix nodes. Semantically equivalent to
// the scalar tape (tests pin the two against each other), but a whole
// network layer is one node, so the heavy per-epoch work runs as matrix
// products instead of scalar graph interpretation. Spatial tangents flow
// through as additional matrix channels.

#include <Eigen/Core>
#include <vector>

#include "dem/columns.hpp"
#include "dem/jet.hpp"
#include "dem/mlp.hpp"

namespace dem::bt {

class BatchTape;

struct BVar {
  BatchTape* bt = nullptr;
  int id = -1;
};

class BatchTape {
 public:
  enum class Op {
    Const,
    Param,
    Linear,     // X W^T + 1 b^T
    LinearNT,   // X W^T (tangent channels; no bias)
    Act,        // elementwise activation
    ActDerivMul,  // T .* act'(Z), tied to an Act node for its caches
    Add,
    Sub,
    Mul,
    Div,
    AddS,
    MulS,
    SubSL,      // scalar - X
    CMul,       // X .* c (constant column)
    ColView,    // column j of a matrix node
    WSum        // weights . X -> 1x1
  };

  struct Node {
    Op op{};
    int a = -1, b = -1, c = -1, aux = -1;
    double scalar = 0.0;
    int col = 0;
    nn::Activation act{};
    Eigen::MatrixXd value;
    Eigen::MatrixXd aux_value;  // activation cache (tanh or elu of input)
    Eigen::VectorXd cdata;      // CMul / WSum coefficients
    Eigen::MatrixXd adjoint;
    Eigen::MatrixXd scratch1, scratch2;  // activation derivative buffers
  };

  std::size_t size() const { return nodes_.size(); }
  const Eigen::MatrixXd& value(int id) const { return nodes_[id].value; }
  const Eigen::MatrixXd& adjoint(int id) const { return nodes_[id].adjoint; }

  // Overwrite a Param node's value (same shape); used when re-evaluating a
  // persistent graph with updated parameters.
  void set_param(int id, const Eigen::MatrixXd& v);

  // Recompute every node value in place, reusing all storage. The graph
  // topology and constants stay fixed.
  void recompute();

  int constant(Eigen::MatrixXd v);
  int param(const Eigen::MatrixXd& v);
  int linear(int x, int w, int b);
  int linear_nt(int x, int w);
  int activation(int z, nn::Activation act);
  int act_deriv_mul(int t, int z, int act_node);
  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int div(int a, int b);
  int add_s(int a, double c);
  int mul_s(int a, double c);
  int sub_sl(double c, int a);
  int cmul(int a, const Eigen::VectorXd& c);
  int col_view(int a, int j);
  int wsum(int a, const Eigen::VectorXd& w);

  // Single reverse sweep from a 1x1 root node.
  void reverse(int root);

 private:
  int push(Node n);
  void compute(Node& n);
  std::vector<Node> nodes_;
};

struct BatchAlg {
  using Col = BVar;
  using S = BVar;
  using P = int;  // batched nets register parameters directly on the tape

  BatchTape* bt = nullptr;
  Eigen::Index rows = 0;

  Col constant(double v) {
    return {bt, bt->constant(Eigen::MatrixXd::Constant(rows, 1, v))};
  }
  Col constant(const Eigen::VectorXd& v) {
    return {bt, bt->constant(Eigen::MatrixXd(v))};
  }
  static Col add(Col a, Col b) { return {a.bt, a.bt->add(a.id, b.id)}; }
  static Col sub(Col a, Col b) { return {a.bt, a.bt->sub(a.id, b.id)}; }
  static Col mul(Col a, Col b) { return {a.bt, a.bt->mul(a.id, b.id)}; }
  static Col div(Col a, Col b) { return {a.bt, a.bt->div(a.id, b.id)}; }
  static Col adds(Col a, double c) { return {a.bt, a.bt->add_s(a.id, c)}; }
  static Col muls(Col a, double c) { return {a.bt, a.bt->mul_s(a.id, c)}; }
  static Col subs_l(double c, Col a) { return {a.bt, a.bt->sub_sl(c, a.id)}; }
  static Col cmul(Col a, const Eigen::VectorXd& c) {
    return {a.bt, a.bt->cmul(a.id, c)};
  }
  static S wsum(Col a, const Eigen::VectorXd& w) {
    return {a.bt, a.bt->wsum(a.id, w)};
  }
  static S sadd(S a, S b) { return {a.bt, a.bt->add(a.id, b.id)}; }
  static S ssub(S a, S b) { return {a.bt, a.bt->sub(a.id, b.id)}; }
  S szero() {
    return {bt, bt->constant(Eigen::MatrixXd::Zero(1, 1))};
  }
  static double sval(S s) { return s.bt->value(s.id)(0, 0); }
};

// Parameter nodes of one network, in the same order as nn::flatten.
struct BatchNet {
  std::vector<int> w_nodes;
  std::vector<int> b_nodes;
};

BatchNet register_net(BatchTape& bt, const nn::MlpParams& params);

// Gradient of the last reverse sweep w.r.t. the net parameters, flattened
// in nn::flatten order.
Eigen::VectorXd net_gradient(const BatchTape& bt, const BatchNet& net);

// Forward pass with D identity-seeded spatial tangent channels; returns one
// jet per network output, as batch columns.
template <int D>
std::vector<ad::Jet<col::CV<BatchAlg>, D>> forward_batched(
    BatchAlg& alg, const BatchNet& net, const nn::MlpConfig& cfg,
    const Eigen::MatrixXd& pts) {
  BatchTape& bt = *alg.bt;
  const Eigen::Index n = pts.rows();
  int h = bt.constant(pts.leftCols(cfg.input_dim));
  std::array<int, D> th;
  for (int i = 0; i < D; ++i) {
    Eigen::MatrixXd seed = Eigen::MatrixXd::Zero(n, cfg.input_dim);
    if (i < cfg.input_dim) seed.col(i).setOnes();
    th[i] = bt.constant(std::move(seed));
  }
  const std::size_t n_layers = net.w_nodes.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    int z = bt.linear(h, net.w_nodes[l], net.b_nodes[l]);
    std::array<int, D> tz;
    for (int i = 0; i < D; ++i) tz[i] = bt.linear_nt(th[i], net.w_nodes[l]);
    if (l + 1 < n_layers) {
      int a = bt.activation(z, cfg.activation);
      for (int i = 0; i < D; ++i)
        th[i] = bt.act_deriv_mul(tz[i], z, a);
      h = a;
    } else {
      h = z;
      th = tz;
    }
  }
  std::vector<ad::Jet<col::CV<BatchAlg>, D>> out(cfg.output_dim);
  for (int j = 0; j < cfg.output_dim; ++j) {
    out[j].v = col::CV<BatchAlg>{&alg, BVar{&bt, bt.col_view(h, j)}};
    for (int i = 0; i < D; ++i)
      out[j].d[i] = col::CV<BatchAlg>{&alg, BVar{&bt, bt.col_view(th[i], j)}};
  }
  return out;
}

}  // namespace dem::bt
