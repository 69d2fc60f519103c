#pragma once

// Scalar reverse-mode tape. Nodes are recorded in evaluation order, so a
// parent always has a smaller index than its children and a single backward
// pass in reverse index order yields exact adjoints.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dem::ad {

class Tape;

// Lightweight handle to a node owned by a Tape.
struct Var {
  Tape* tape = nullptr;
  std::int32_t idx = -1;

  bool valid() const { return tape != nullptr && idx >= 0; }
};

// elu(z) = z for z >= 0, exp(z)-1 otherwise. elu'(0) is taken as 1; the
// one-sided limits agree, so elu^2 has a continuous derivative there.
inline double elu(double z) { return z >= 0.0 ? z : std::expm1(z); }
inline double elu_deriv(double z) { return z >= 0.0 ? 1.0 : std::exp(z); }

class Tape {
 public:
  struct Node {
    double value = 0.0;
    double adjoint = 0.0;
    std::array<std::int32_t, 2> parent{-1, -1};
    std::array<double, 2> partial{0.0, 0.0};
  };

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  double value(Var v) const { return nodes_[v.idx].value; }
  double adjoint(Var v) const { return nodes_[v.idx].adjoint; }
  const Node& node(std::int32_t i) const { return nodes_[i]; }

  // Leaf node with no parents.
  Var scalar(double value) {
    Node n;
    n.value = value;
    return push(n);
  }

  Var unary(double value, Var a, double pa) {
    assert(a.tape == this);
    Node n;
    n.value = value;
    n.parent[0] = a.idx;
    n.partial[0] = pa;
    return push(n);
  }

  Var binary(double value, Var a, double pa, Var b, double pb) {
    assert(a.tape == this && b.tape == this);
    Node n;
    n.value = value;
    n.parent[0] = a.idx;
    n.partial[0] = pa;
    n.parent[1] = b.idx;
    n.partial[1] = pb;
    return push(n);
  }

  // Reverse sweep from a scalar root: after the call, adjoint(v) equals
  // d(root)/d(v) for every node recorded no later than root.
  void reverse(Var root) {
    assert(root.tape == this);
    for (Node& n : nodes_) n.adjoint = 0.0;
    nodes_[root.idx].adjoint = 1.0;
    for (std::int32_t i = root.idx; i >= 0; --i) {
      const Node& n = nodes_[i];
      const double a = n.adjoint;
      if (a == 0.0) continue;
      if (n.parent[0] >= 0) nodes_[n.parent[0]].adjoint += a * n.partial[0];
      if (n.parent[1] >= 0) nodes_[n.parent[1]].adjoint += a * n.partial[1];
    }
  }

 private:
  Var push(const Node& n) {
    assert(n.parent[0] < static_cast<std::int32_t>(nodes_.size()));
    assert(n.parent[1] < static_cast<std::int32_t>(nodes_.size()));
    nodes_.push_back(n);
    return Var{this, static_cast<std::int32_t>(nodes_.size() - 1)};
  }

  std::vector<Node> nodes_;
};

// -- arithmetic --------------------------------------------------------

inline Var operator+(Var a, Var b) {
  Tape& t = *a.tape;
  return t.binary(t.value(a) + t.value(b), a, 1.0, b, 1.0);
}
inline Var operator-(Var a, Var b) {
  Tape& t = *a.tape;
  return t.binary(t.value(a) - t.value(b), a, 1.0, b, -1.0);
}
inline Var operator*(Var a, Var b) {
  Tape& t = *a.tape;
  return t.binary(t.value(a) * t.value(b), a, t.value(b), b, t.value(a));
}
inline Var operator/(Var a, Var b) {
  Tape& t = *a.tape;
  const double bv = t.value(b);
  if (bv == 0.0) throw std::domain_error("tape: division by zero");
  const double v = t.value(a) / bv;
  return t.binary(v, a, 1.0 / bv, b, -v / bv);
}
inline Var operator-(Var a) {
  Tape& t = *a.tape;
  return t.unary(-t.value(a), a, -1.0);
}

inline Var operator+(Var a, double c) {
  Tape& t = *a.tape;
  return t.unary(t.value(a) + c, a, 1.0);
}
inline Var operator+(double c, Var a) { return a + c; }
inline Var operator-(Var a, double c) { return a + (-c); }
inline Var operator-(double c, Var a) {
  Tape& t = *a.tape;
  return t.unary(c - t.value(a), a, -1.0);
}
inline Var operator*(Var a, double c) {
  Tape& t = *a.tape;
  return t.unary(t.value(a) * c, a, c);
}
inline Var operator*(double c, Var a) { return a * c; }
inline Var operator/(Var a, double c) {
  if (c == 0.0) throw std::domain_error("tape: division by zero");
  return a * (1.0 / c);
}
inline Var operator/(double c, Var a) {
  Tape& t = *a.tape;
  const double av = t.value(a);
  if (av == 0.0) throw std::domain_error("tape: division by zero");
  const double v = c / av;
  return t.unary(v, a, -v / av);
}

// -- activations and powers --------------------------------------------

inline Var tanh(Var a) {
  Tape& t = *a.tape;
  const double s = std::tanh(t.value(a));
  return t.unary(s, a, 1.0 - s * s);
}

// tanh^2 as a single node: d/dz tanh^2 = 2 tanh (1 - tanh^2).
inline Var tanh_sq(Var a) {
  Tape& t = *a.tape;
  const double s = std::tanh(t.value(a));
  return t.unary(s * s, a, 2.0 * s * (1.0 - s * s));
}

// elu^2 as a single node: d/dz elu^2 = 2 elu elu'.
inline Var elu_sq(Var a) {
  Tape& t = *a.tape;
  const double z = t.value(a);
  const double e = elu(z);
  return t.unary(e * e, a, 2.0 * e * elu_deriv(z));
}

inline Var elu(Var a) {
  Tape& t = *a.tape;
  const double z = t.value(a);
  return t.unary(elu(z), a, elu_deriv(z));
}

// Derivative of elu as a tape value; its own derivative is 0 for z >= 0.
inline Var elu_deriv(Var a) {
  Tape& t = *a.tape;
  const double z = t.value(a);
  return t.unary(elu_deriv(z), a, z >= 0.0 ? 0.0 : std::exp(z));
}

inline Var pow(Var a, double p) {
  Tape& t = *a.tape;
  const double v = t.value(a);
  return t.unary(std::pow(v, p), a, p * std::pow(v, p - 1.0));
}

inline Var square(Var a) { return a * a; }

}  // namespace dem::ad
