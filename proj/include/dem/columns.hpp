#pragma once

// Column algebras. A column holds one value per sample point; the same
// physics/transform/loss code runs over plain doubles (evaluation only),
// tape variables (reverse-mode gradients), or batched matrix nodes by
// swapping the algebra. CV<A> is the value wrapper the shared code sees.

#include <Eigen/Core>
#include <vector>

#include "dem/jet.hpp"
#include "dem/tape.hpp"

namespace dem::col {

template <class A>
struct CV {
  A* alg = nullptr;
  typename A::Col h{};
};

// ---------------------------------------------------------------------
// Plain algebra: columns are arrays of doubles, no derivative tracking.
// ---------------------------------------------------------------------
struct PlainAlg {
  using Col = Eigen::ArrayXd;
  using S = double;
  using P = double;

  Eigen::Index rows = 0;

  Col constant(double c) const { return Col::Constant(rows, c); }
  Col constant(const Eigen::VectorXd& v) const { return v.array(); }

  static Col add(const Col& a, const Col& b) { return a + b; }
  static Col sub(const Col& a, const Col& b) { return a - b; }
  static Col mul(const Col& a, const Col& b) { return a * b; }
  static Col div(const Col& a, const Col& b) { return a / b; }
  static Col adds(const Col& a, double c) { return a + c; }
  static Col muls(const Col& a, double c) { return a * c; }
  static Col subs_l(double c, const Col& a) { return c - a; }
  static Col tanh_(const Col& a) { return a.tanh(); }
  static Col elu_(const Col& a) {
    return a.unaryExpr([](double z) { return ad::elu(z); });
  }
  static Col elu_deriv_(const Col& a) {
    return a.unaryExpr([](double z) { return ad::elu_deriv(z); });
  }
  static Col cmul(const Col& a, const Eigen::VectorXd& c) {
    return a * c.array();
  }
  static Col mulp(const Col& a, P p) { return a * p; }
  static Col addp(const Col& a, P p) { return a + p; }
  static S wsum(const Col& a, const Eigen::VectorXd& w) {
    return (a * w.array()).sum();
  }
  static S sadd(S a, S b) { return a + b; }
  static S ssub(S a, S b) { return a - b; }
  static S szero() { return 0.0; }
  static double sval(S s) { return s; }
};

// ---------------------------------------------------------------------
// Tape algebra: columns are vectors of tape variables. Every elementwise
// operation records B nodes; gradients come from a reverse sweep.
// ---------------------------------------------------------------------
struct TapeAlg {
  using Col = std::vector<ad::Var>;
  using S = ad::Var;
  using P = ad::Var;

  ad::Tape* tape = nullptr;
  Eigen::Index rows = 0;

  Col constant(double c) {
    Col r(rows);
    for (auto& v : r) v = tape->scalar(c);
    return r;
  }
  Col constant(const Eigen::VectorXd& vals) {
    Col r(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) r[i] = tape->scalar(vals[i]);
    return r;
  }

  static Col zip(const Col& a, const Col& b, ad::Var (*op)(ad::Var, ad::Var)) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = op(a[i], b[i]);
    return r;
  }
  static Col add(const Col& a, const Col& b) {
    return zip(a, b, [](ad::Var x, ad::Var y) { return x + y; });
  }
  static Col sub(const Col& a, const Col& b) {
    return zip(a, b, [](ad::Var x, ad::Var y) { return x - y; });
  }
  static Col mul(const Col& a, const Col& b) {
    return zip(a, b, [](ad::Var x, ad::Var y) { return x * y; });
  }
  static Col div(const Col& a, const Col& b) {
    return zip(a, b, [](ad::Var x, ad::Var y) { return x / y; });
  }
  static Col adds(const Col& a, double c) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c;
    return r;
  }
  static Col muls(const Col& a, double c) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
  }
  static Col subs_l(double c, const Col& a) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c - a[i];
    return r;
  }
  static Col tanh_(const Col& a) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ad::tanh(a[i]);
    return r;
  }
  static Col elu_(const Col& a) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ad::elu(a[i]);
    return r;
  }
  static Col elu_deriv_(const Col& a) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ad::elu_deriv(a[i]);
    return r;
  }
  static Col cmul(const Col& a, const Eigen::VectorXd& c) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c[i];
    return r;
  }
  static Col mulp(const Col& a, P p) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * p;
    return r;
  }
  static Col addp(const Col& a, P p) {
    Col r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + p;
    return r;
  }
  // Fixed-order accumulation keeps gradients bit-reproducible.
  S wsum(const Col& a, const Eigen::VectorXd& w) {
    ad::Var acc = tape->scalar(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * w[i];
    return acc;
  }
  static S sadd(S a, S b) { return a + b; }
  static S ssub(S a, S b) { return a - b; }
  S szero() { return tape->scalar(0.0); }
  static double sval(S s) { return s.tape->value(s); }
};

// -- CV operator sugar ---------------------------------------------------

template <class A>
CV<A> operator+(const CV<A>& a, const CV<A>& b) {
  return {a.alg, a.alg->add(a.h, b.h)};
}
template <class A>
CV<A> operator-(const CV<A>& a, const CV<A>& b) {
  return {a.alg, a.alg->sub(a.h, b.h)};
}
template <class A>
CV<A> operator*(const CV<A>& a, const CV<A>& b) {
  return {a.alg, a.alg->mul(a.h, b.h)};
}
template <class A>
CV<A> operator/(const CV<A>& a, const CV<A>& b) {
  return {a.alg, a.alg->div(a.h, b.h)};
}
template <class A>
CV<A> operator+(const CV<A>& a, double c) {
  return {a.alg, a.alg->adds(a.h, c)};
}
template <class A>
CV<A> operator+(double c, const CV<A>& a) {
  return a + c;
}
template <class A>
CV<A> operator-(const CV<A>& a, double c) {
  return a + (-c);
}
template <class A>
CV<A> operator-(double c, const CV<A>& a) {
  return {a.alg, a.alg->subs_l(c, a.h)};
}
template <class A>
CV<A> operator*(const CV<A>& a, double c) {
  return {a.alg, a.alg->muls(a.h, c)};
}
template <class A>
CV<A> operator*(double c, const CV<A>& a) {
  return a * c;
}
template <class A>
CV<A> operator-(const CV<A>& a) {
  return a * -1.0;
}
template <class A>
CV<A> tanh(const CV<A>& a) {
  return {a.alg, a.alg->tanh_(a.h)};
}
template <class A>
CV<A> elu(const CV<A>& a) {
  return {a.alg, a.alg->elu_(a.h)};
}
template <class A>
CV<A> elu_deriv(const CV<A>& a) {
  return {a.alg, a.alg->elu_deriv_(a.h)};
}
template <class A>
CV<A> cmul(const CV<A>& a, const Eigen::VectorXd& c) {
  return {a.alg, a.alg->cmul(a.h, c)};
}
template <class A>
typename A::S wsum(const CV<A>& a, const Eigen::VectorXd& w) {
  return a.alg->wsum(a.h, w);
}
template <class A>
CV<A> const_col(A& alg, double c) {
  return {&alg, alg.constant(c)};
}
template <class A>
CV<A> const_col(A& alg, const Eigen::VectorXd& v) {
  return {&alg, alg.constant(v)};
}

// Mixed multiply against a per-point constant; for plain scalars this is an
// ordinary product. Lets the energy integrand run on both columns and
// point values.
inline double cmul(double a, double c) { return a * c; }
inline ad::Var cmul(ad::Var a, double c) { return a * c; }

// Coordinates lifted as column jets with identity tangent seeding.
template <class A, int D>
std::array<ad::Jet<CV<A>, D>, D> lift_coords(A& alg,
                                             const Eigen::MatrixXd& pts) {
  std::array<ad::Jet<CV<A>, D>, D> r;
  for (int j = 0; j < D; ++j) {
    r[j].v = const_col(alg, Eigen::VectorXd(pts.col(j)));
    for (int i = 0; i < D; ++i)
      r[j].d[i] = const_col(alg, i == j ? 1.0 : 0.0);
  }
  return r;
}

}  // namespace dem::col
