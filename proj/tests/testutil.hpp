#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <random>

namespace demtest {

// Central finite differences, the independent oracle for gradient checks.
inline Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = f(xp);
    xp[i] = xi - h;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Relative error with an absolute floor for near-zero entries.
inline double grad_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         double abs_floor = 1e-8) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 1.0e-30});
    const double abs_err = std::abs(a[i] - b[i]);
    if (abs_err <= abs_floor) continue;
    worst = std::max(worst, abs_err / denom);
  }
  return worst;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace demtest
