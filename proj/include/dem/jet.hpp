#pragma once

// First-order forward-mode value: a primal plus D spatial tangents. The
// scalar type T can be double (plain evaluation), ad::Var (tangents become
// tape expressions, enabling forward-over-reverse), or a column type.

#include <array>
#include <cmath>
#include <cstddef>

#include "dem/tape.hpp"

namespace dem::ad {

template <class T, int D>
struct Jet {
  T v{};
  std::array<T, D> d{};

  Jet() = default;
  explicit Jet(T value) : v(value) {
    for (auto& t : d) t = value * 0.0;
  }
  Jet(T value, std::array<T, D> tangents) : v(value), d(tangents) {}
};

template <class T, int D>
Jet<T, D> operator+(const Jet<T, D>& a, const Jet<T, D>& b) {
  Jet<T, D> r;
  r.v = a.v + b.v;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <class T, int D>
Jet<T, D> operator-(const Jet<T, D>& a, const Jet<T, D>& b) {
  Jet<T, D> r;
  r.v = a.v - b.v;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <class T, int D>
Jet<T, D> operator*(const Jet<T, D>& a, const Jet<T, D>& b) {
  Jet<T, D> r;
  r.v = a.v * b.v;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <class T, int D>
Jet<T, D> operator-(const Jet<T, D>& a) {
  Jet<T, D> r;
  r.v = -a.v;
  for (int i = 0; i < D; ++i) r.d[i] = -a.d[i];
  return r;
}

// Mixed ops with doubles (constants carry no tangent).
template <class T, int D>
Jet<T, D> operator+(const Jet<T, D>& a, double c) {
  Jet<T, D> r = a;
  r.v = a.v + c;
  return r;
}
template <class T, int D>
Jet<T, D> operator+(double c, const Jet<T, D>& a) {
  return a + c;
}
template <class T, int D>
Jet<T, D> operator-(const Jet<T, D>& a, double c) {
  return a + (-c);
}
template <class T, int D>
Jet<T, D> operator-(double c, const Jet<T, D>& a) {
  return (-a) + c;
}
template <class T, int D>
Jet<T, D> operator*(const Jet<T, D>& a, double c) {
  Jet<T, D> r;
  r.v = a.v * c;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] * c;
  return r;
}
template <class T, int D>
Jet<T, D> operator*(double c, const Jet<T, D>& a) {
  return a * c;
}

template <class T, int D>
Jet<T, D> jet_tanh(const Jet<T, D>& a) {
  using std::tanh;
  Jet<T, D> r;
  T s = tanh(a.v);
  T coef = 1.0 - s * s;
  r.v = s;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] * coef;
  return r;
}

template <class T, int D>
Jet<T, D> jet_tanh_sq(const Jet<T, D>& a) {
  using std::tanh;
  Jet<T, D> r;
  T s = tanh(a.v);
  T coef = 2.0 * (s * (1.0 - s * s));
  r.v = s * s;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] * coef;
  return r;
}

template <class T, int D>
Jet<T, D> jet_elu_sq(const Jet<T, D>& a) {
  Jet<T, D> r;
  T e = elu(a.v);
  T coef = 2.0 * (e * elu_deriv(a.v));
  r.v = e * e;
  for (int i = 0; i < D; ++i) r.d[i] = a.d[i] * coef;
  return r;
}

// Identity seeding of coordinates: component j of the returned vector has
// tangent_i = delta_ij.
template <class T, int D>
std::array<Jet<T, D>, D> dual_lift(const std::array<T, D>& x, const T& one,
                                   const T& zero) {
  std::array<Jet<T, D>, D> r;
  for (int j = 0; j < D; ++j) {
    r[j].v = x[j];
    for (int i = 0; i < D; ++i) r[j].d[i] = (i == j) ? one : zero;
  }
  return r;
}

}  // namespace dem::ad
