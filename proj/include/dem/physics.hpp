#pragma once

// Small-strain thermo-elastic constitutive relations and energy densities.
// Plain double/Eigen versions serve the reference oracles and tests; the
// templated versions run inside loss assembly on any column algebra.
//
// Voigt convention: (e11, e22, e12) with tensor shear, so the shear modulus
// entry E/(1+nu) gives s12 = 2 G e12 and the energy density is the double
// contraction e11 s11 + e22 s22 + 2 e12 s12.

#include <Eigen/Core>
#include <functional>
#include <stdexcept>

#include "dem/columns.hpp"

namespace dem::phys {

struct MaterialModel {
  std::function<double(double, double)> youngs;        // E(x)
  std::function<double(double, double)> conductivity;  // k(x)
  double poisson = 0.3;
  double alpha = 0.0;
  double t_ref = 0.0;

  Eigen::VectorXd youngs_at(const Eigen::MatrixXd& pts) const {
    Eigen::VectorXd e(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      e[i] = youngs(pts(i, 0), pts(i, 1));
    return e;
  }
  Eigen::VectorXd conductivity_at(const Eigen::MatrixXd& pts) const {
    Eigen::VectorXd k(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      k[i] = conductivity(pts(i, 0), pts(i, 1));
    return k;
  }
};

// Symmetric part of a displacement gradient.
inline Eigen::Matrix2d small_strain(const Eigen::Matrix2d& grad_u) {
  return 0.5 * (grad_u + grad_u.transpose());
}

// Elastic strain: thermal expansion removed from the normal components.
inline Eigen::Matrix2d elastic_strain(const Eigen::Matrix2d& strain,
                                      double temp, double alpha,
                                      double t_ref) {
  Eigen::Matrix2d e = strain;
  const double th = alpha * (temp - t_ref);
  e(0, 0) -= th;
  e(1, 1) -= th;
  return e;
}

inline Eigen::Matrix3d plane_stress_C(double youngs, double poisson) {
  if (!(poisson > -1.0 && poisson < 0.5))
    throw std::domain_error("plane_stress_C: poisson ratio out of range");
  const double a = 1.0 / (1.0 - poisson * poisson);
  Eigen::Matrix3d c;
  c << a, poisson * a, 0.0, poisson * a, a, 0.0, 0.0, 0.0,
      1.0 / (1.0 + poisson);
  return youngs * c;
}

inline Eigen::Vector3d to_voigt(const Eigen::Matrix2d& e) {
  return {e(0, 0), e(1, 1), e(0, 1)};
}

inline Eigen::Vector3d stress(const Eigen::Vector3d& elastic_voigt,
                              const Eigen::Matrix3d& c) {
  return c * elastic_voigt;
}

inline double strain_energy_density(const Eigen::Vector3d& elastic_voigt,
                                    const Eigen::Matrix3d& c) {
  const Eigen::Vector3d s = c * elastic_voigt;
  return 0.5 * (elastic_voigt[0] * s[0] + elastic_voigt[1] * s[1] +
                2.0 * elastic_voigt[2] * s[2]);
}

inline double thermal_energy_density(const Eigen::Vector2d& grad_t, double k) {
  if (!(k > 0.0)) throw std::domain_error("thermal_energy_density: k <= 0");
  return 0.5 * k * grad_t.squaredNorm();
}

// -- templated integrands --------------------------------------------------

// K is double for pointwise evaluation or a per-point constant vector for
// column algebras; cmul resolves the multiplication.

template <class T>
struct Voigt3 {
  T e11, e22, e12;
};

template <class T, class K>
Voigt3<T> stress_plane(const Voigt3<T>& eel, const K& youngs,
                       double poisson) {
  using col::cmul;
  const double a = 1.0 / (1.0 - poisson * poisson);
  Voigt3<T> s;
  s.e11 = cmul(eel.e11 + poisson * eel.e22, youngs) * a;
  s.e22 = cmul(eel.e22 + poisson * eel.e11, youngs) * a;
  s.e12 = cmul(eel.e12, youngs) * (1.0 / (1.0 + poisson));
  return s;
}

template <class T, class K>
T strain_energy_plane(const Voigt3<T>& eel, const K& youngs, double poisson) {
  const Voigt3<T> s = stress_plane(eel, youngs, poisson);
  return 0.5 * (eel.e11 * s.e11 + eel.e22 * s.e22 + 2.0 * (eel.e12 * s.e12));
}

template <class T, class K>
T strain_energy_1d(const T& eel, const K& youngs) {
  using col::cmul;
  return 0.5 * (eel * cmul(eel, youngs));
}

template <class T, class K>
T thermal_energy(const T& gt_sq, const K& conductivity) {
  using col::cmul;
  return 0.5 * cmul(gt_sq, conductivity);
}

}  // namespace dem::phys
