#pragma once

// Output transforms that make the admissible fields satisfy each problem's
// Dirichlet data identically, for any network output. Coordinates enter as
// jets, so the spatial tangents of the transformed fields follow by the
// chain rule with no extra bookkeeping.

#include <array>
#include <stdexcept>
#include <vector>

#include "dem/jet.hpp"

namespace dem::fields {

enum class TransformId {
  Dirch1d,   // u = x + x(1-x) v0            : u(0)=0, u(1)=1
  Neu1d,     // u = x v0                     : u(0)=0
  Thermo1d,  // u = x + x(1-x) v0, T likewise with v1
  Hadamard,  // u1 = x1 v0, u2 = x2 v1       : symmetry planes pinned
  Bottom2d,  // u1 = x2 v0, u2 = x2 v1       : clamped bottom edge
  Dirch2d,   // u1 = x2 v0, u2 = x2/(3L) + (3L - x2) x2 v1
  Thermo2d   // Dirch2d plus T = x2/(3L) + x2 (3L - x2) v2
};

template <class T, int D>
struct FieldJets {
  std::array<ad::Jet<T, D>, D> u;
  ad::Jet<T, D> temp;
  bool has_temp = false;
};

template <class T>
FieldJets<T, 1> transform_1d(TransformId id, const ad::Jet<T, 1>& x,
                             const std::vector<ad::Jet<T, 1>>& v) {
  FieldJets<T, 1> f;
  switch (id) {
    case TransformId::Dirch1d:
      f.u[0] = x + x * (1.0 - x) * v[0];
      return f;
    case TransformId::Neu1d:
      f.u[0] = x * v[0];
      return f;
    case TransformId::Thermo1d:
      f.u[0] = x + x * (1.0 - x) * v[0];
      f.temp = x + x * (1.0 - x) * v[1];
      f.has_temp = true;
      return f;
    default:
      throw std::invalid_argument("transform_1d: not a 1d transform");
  }
}

template <class T>
FieldJets<T, 2> transform_2d(TransformId id, const ad::Jet<T, 2>& x1,
                             const ad::Jet<T, 2>& x2,
                             const std::vector<ad::Jet<T, 2>>& v,
                             double length) {
  FieldJets<T, 2> f;
  const double h = 3.0 * length;  // domain height
  switch (id) {
    case TransformId::Hadamard:
      f.u[0] = x1 * v[0];
      f.u[1] = x2 * v[1];
      return f;
    case TransformId::Bottom2d:
      f.u[0] = x2 * v[0];
      f.u[1] = x2 * v[1];
      return f;
    case TransformId::Dirch2d:
      f.u[0] = x2 * v[0];
      f.u[1] = x2 * (1.0 / h) + (h - x2) * x2 * v[1];
      return f;
    case TransformId::Thermo2d:
      f.u[0] = x2 * v[0];
      f.u[1] = x2 * (1.0 / h) + x2 * (h - x2) * v[1];
      f.temp = x2 * (1.0 / h) + x2 * (h - x2) * v[2];
      f.has_temp = true;
      return f;
    default:
      throw std::invalid_argument("transform_2d: not a 2d transform");
  }
}

}  // namespace dem::fields
