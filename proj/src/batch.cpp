#include "dem/batch.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace dem::bt {

namespace {

// psi' and psi'' of an activation, from the pre-activation values and the
// act node caches (value and aux). Writes into caller-owned buffers so a
// persistent graph does not allocate per evaluation.
void act_derivs(nn::Activation act, const Eigen::MatrixXd& z,
                const Eigen::MatrixXd& value, const Eigen::MatrixXd& aux,
                Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
  switch (act) {
    case nn::Activation::Tanh: {
      // value = tanh(z)
      const auto s = value.array();
      if (d1) *d1 = (1.0 - s.square()).matrix();
      if (d2) *d2 = (-2.0 * s * (1.0 - s.square())).matrix();
      return;
    }
    case nn::Activation::TanhSq: {
      // aux = tanh(z), value = aux^2
      const auto s = aux.array();
      if (d1) *d1 = (2.0 * s * (1.0 - s.square())).matrix();
      if (d2)
        *d2 = (2.0 * (1.0 - s.square()) * (1.0 - 3.0 * s.square())).matrix();
      return;
    }
    case nn::Activation::EluSq: {
      // aux = elu(z), value = aux^2; elu' = 1 (z>=0) or aux+1 (z<0)
      Eigen::MatrixXd& r1 = *d1;
      r1.resize(z.rows(), z.cols());
      if (d2) d2->resize(z.rows(), z.cols());
      for (Eigen::Index j = 0; j < z.cols(); ++j)
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
          const double e = aux(i, j);
          if (z(i, j) >= 0.0) {
            r1(i, j) = 2.0 * e;
            if (d2) (*d2)(i, j) = 2.0;
          } else {
            r1(i, j) = 2.0 * e * (e + 1.0);
            if (d2) (*d2)(i, j) = 2.0 * (e + 1.0) * (2.0 * e + 1.0);
          }
        }
      return;
    }
  }
  throw std::logic_error("act_derivs: unknown activation");
}

}  // namespace

void BatchTape::compute(Node& n) {
  switch (n.op) {
    case Op::Const:
    case Op::Param:
      return;
    case Op::Linear:
      n.value.noalias() = nodes_[n.a].value * nodes_[n.b].value.transpose();
      n.value.rowwise() += nodes_[n.c].value.col(0).transpose();
      return;
    case Op::LinearNT:
      n.value.noalias() = nodes_[n.a].value * nodes_[n.b].value.transpose();
      return;
    case Op::Act: {
      const Eigen::MatrixXd& zv = nodes_[n.a].value;
      switch (n.act) {
        case nn::Activation::Tanh:
          n.value = zv.array().tanh().matrix();
          break;
        case nn::Activation::TanhSq:
          n.aux_value = zv.array().tanh().matrix();
          n.value = n.aux_value.array().square().matrix();
          break;
        case nn::Activation::EluSq:
          n.aux_value = zv.unaryExpr([](double v) { return ad::elu(v); });
          n.value = n.aux_value.array().square().matrix();
          break;
      }
      return;
    }
    case Op::ActDerivMul: {
      const Node& actn = nodes_[n.aux];
      act_derivs(actn.act, nodes_[n.b].value, actn.value, actn.aux_value,
                 &n.scratch1, nullptr);
      n.value = nodes_[n.a].value.cwiseProduct(n.scratch1);
      return;
    }
    case Op::Add:
      n.value = nodes_[n.a].value + nodes_[n.b].value;
      return;
    case Op::Sub:
      n.value = nodes_[n.a].value - nodes_[n.b].value;
      return;
    case Op::Mul:
      n.value = nodes_[n.a].value.cwiseProduct(nodes_[n.b].value);
      return;
    case Op::Div:
      if ((nodes_[n.b].value.array() == 0.0).any())
        throw std::domain_error("batch tape: division by zero");
      n.value = nodes_[n.a].value.cwiseQuotient(nodes_[n.b].value);
      return;
    case Op::AddS:
      n.value = (nodes_[n.a].value.array() + n.scalar).matrix();
      return;
    case Op::MulS:
      n.value = nodes_[n.a].value * n.scalar;
      return;
    case Op::SubSL:
      n.value = (n.scalar - nodes_[n.a].value.array()).matrix();
      return;
    case Op::CMul:
      n.value = nodes_[n.a].value.cwiseProduct(Eigen::MatrixXd(n.cdata));
      return;
    case Op::ColView:
      n.value = nodes_[n.a].value.col(n.col);
      return;
    case Op::WSum:
      n.value.resize(1, 1);
      n.value(0, 0) = nodes_[n.a].value.col(0).dot(n.cdata);
      return;
  }
  throw std::logic_error("batch tape: unknown op");
}

int BatchTape::push(Node n) {
  nodes_.push_back(std::move(n));
  compute(nodes_.back());
  return static_cast<int>(nodes_.size() - 1);
}

int BatchTape::constant(Eigen::MatrixXd v) {
  Node n;
  n.op = Op::Const;
  n.value = std::move(v);
  return push(std::move(n));
}

int BatchTape::param(const Eigen::MatrixXd& v) {
  Node n;
  n.op = Op::Param;
  n.value = v;
  return push(std::move(n));
}

void BatchTape::set_param(int id, const Eigen::MatrixXd& v) {
  Node& n = nodes_[id];
  assert(n.op == Op::Param);
  assert(n.value.rows() == v.rows() && n.value.cols() == v.cols());
  n.value = v;
}

void BatchTape::recompute() {
  for (Node& n : nodes_) compute(n);
}

int BatchTape::linear(int x, int w, int b) {
  Node n;
  n.op = Op::Linear;
  n.a = x;
  n.b = w;
  n.c = b;
  return push(std::move(n));
}

int BatchTape::linear_nt(int x, int w) {
  Node n;
  n.op = Op::LinearNT;
  n.a = x;
  n.b = w;
  return push(std::move(n));
}

int BatchTape::activation(int z, nn::Activation act) {
  Node n;
  n.op = Op::Act;
  n.a = z;
  n.act = act;
  return push(std::move(n));
}

int BatchTape::act_deriv_mul(int t, int z, int act_node) {
  Node n;
  n.op = Op::ActDerivMul;
  n.a = t;
  n.b = z;
  n.aux = act_node;
  return push(std::move(n));
}

int BatchTape::add(int a, int b) {
  Node n;
  n.op = Op::Add;
  n.a = a;
  n.b = b;
  return push(std::move(n));
}

int BatchTape::sub(int a, int b) {
  Node n;
  n.op = Op::Sub;
  n.a = a;
  n.b = b;
  return push(std::move(n));
}

int BatchTape::mul(int a, int b) {
  Node n;
  n.op = Op::Mul;
  n.a = a;
  n.b = b;
  return push(std::move(n));
}

int BatchTape::div(int a, int b) {
  Node n;
  n.op = Op::Div;
  n.a = a;
  n.b = b;
  return push(std::move(n));
}

int BatchTape::add_s(int a, double c) {
  Node n;
  n.op = Op::AddS;
  n.a = a;
  n.scalar = c;
  return push(std::move(n));
}

int BatchTape::mul_s(int a, double c) {
  Node n;
  n.op = Op::MulS;
  n.a = a;
  n.scalar = c;
  return push(std::move(n));
}

int BatchTape::sub_sl(double c, int a) {
  Node n;
  n.op = Op::SubSL;
  n.a = a;
  n.scalar = c;
  return push(std::move(n));
}

int BatchTape::cmul(int a, const Eigen::VectorXd& c) {
  Node n;
  n.op = Op::CMul;
  n.a = a;
  n.cdata = c;
  return push(std::move(n));
}

int BatchTape::col_view(int a, int j) {
  Node n;
  n.op = Op::ColView;
  n.a = a;
  n.col = j;
  return push(std::move(n));
}

int BatchTape::wsum(int a, const Eigen::VectorXd& w) {
  Node n;
  n.op = Op::WSum;
  n.a = a;
  n.cdata = w;
  return push(std::move(n));
}

void BatchTape::reverse(int root) {
  assert(nodes_[root].value.size() == 1);
  for (Node& n : nodes_) {
    n.adjoint.resize(n.value.rows(), n.value.cols());
    n.adjoint.setZero();
  }
  nodes_[root].adjoint(0, 0) = 1.0;
  for (int i = root; i >= 0; --i) {
    Node& n = nodes_[i];
    const Eigen::MatrixXd& a = n.adjoint;
    switch (n.op) {
      case Op::Const:
      case Op::Param:
        break;
      case Op::Linear: {
        nodes_[n.a].adjoint.noalias() += a * nodes_[n.b].value;
        nodes_[n.b].adjoint.noalias() += a.transpose() * nodes_[n.a].value;
        nodes_[n.c].adjoint.col(0) += a.colwise().sum().transpose();
        break;
      }
      case Op::LinearNT: {
        nodes_[n.a].adjoint.noalias() += a * nodes_[n.b].value;
        nodes_[n.b].adjoint.noalias() += a.transpose() * nodes_[n.a].value;
        break;
      }
      case Op::Act: {
        act_derivs(n.act, nodes_[n.a].value, n.value, n.aux_value, &n.scratch1,
                   nullptr);
        nodes_[n.a].adjoint += a.cwiseProduct(n.scratch1);
        break;
      }
      case Op::ActDerivMul: {
        Node& actn = nodes_[n.aux];
        act_derivs(actn.act, nodes_[n.b].value, actn.value, actn.aux_value,
                   &n.scratch1, &n.scratch2);
        nodes_[n.a].adjoint += a.cwiseProduct(n.scratch1);
        nodes_[n.b].adjoint +=
            a.cwiseProduct(nodes_[n.a].value).cwiseProduct(n.scratch2);
        break;
      }
      case Op::Add:
        nodes_[n.a].adjoint += a;
        nodes_[n.b].adjoint += a;
        break;
      case Op::Sub:
        nodes_[n.a].adjoint += a;
        nodes_[n.b].adjoint -= a;
        break;
      case Op::Mul:
        nodes_[n.a].adjoint += a.cwiseProduct(nodes_[n.b].value);
        nodes_[n.b].adjoint += a.cwiseProduct(nodes_[n.a].value);
        break;
      case Op::Div:
        nodes_[n.a].adjoint += a.cwiseQuotient(nodes_[n.b].value);
        nodes_[n.b].adjoint -=
            a.cwiseProduct(n.value).cwiseQuotient(nodes_[n.b].value);
        break;
      case Op::AddS:
        nodes_[n.a].adjoint += a;
        break;
      case Op::MulS:
        nodes_[n.a].adjoint += a * n.scalar;
        break;
      case Op::SubSL:
        nodes_[n.a].adjoint -= a;
        break;
      case Op::CMul:
        nodes_[n.a].adjoint += a.cwiseProduct(Eigen::MatrixXd(n.cdata));
        break;
      case Op::ColView:
        nodes_[n.a].adjoint.col(n.col) += a.col(0);
        break;
      case Op::WSum:
        nodes_[n.a].adjoint.col(0) += a(0, 0) * n.cdata;
        break;
    }
  }
}

BatchNet register_net(BatchTape& bt, const nn::MlpParams& params) {
  BatchNet net;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    net.w_nodes.push_back(bt.param(params.weights[l]));
    net.b_nodes.push_back(bt.param(params.biases[l]));
  }
  return net;
}

Eigen::VectorXd net_gradient(const BatchTape& bt, const BatchNet& net) {
  std::size_t total = 0;
  for (std::size_t l = 0; l < net.w_nodes.size(); ++l)
    total += static_cast<std::size_t>(bt.value(net.w_nodes[l]).size() +
                                      bt.value(net.b_nodes[l]).size());
  Eigen::VectorXd g(total);
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < net.w_nodes.size(); ++l) {
    const Eigen::MatrixXd& gw = bt.adjoint(net.w_nodes[l]);
    for (Eigen::Index r = 0; r < gw.rows(); ++r)
      for (Eigen::Index c = 0; c < gw.cols(); ++c) g[k++] = gw(r, c);
    const Eigen::MatrixXd& gb = bt.adjoint(net.b_nodes[l]);
    for (Eigen::Index r = 0; r < gb.rows(); ++r) g[k++] = gb(r, 0);
  }
  return g;
}

}  // namespace dem::bt
