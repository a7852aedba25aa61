#ifndef JOULEWIRE_QUADRATURE_HPP
#define JOULEWIRE_QUADRATURE_HPP

#include <Eigen/Dense>
#include <functional>

namespace joulewire {

struct QuadratureSettings {
  double abs_tol = 1e-12;   // per component
  int max_intervals = 4000; // subdivision budget
};

// Adaptive Gauss-Kronrod (G7/K15) for vector-valued integrands. All
// components share the same nodes, so pointwise antisymmetry of an integrand
// (e.g. conservation sums over terminals) survives integration to rounding.
// Throws std::runtime_error when the tolerance cannot be met within the
// interval budget.
Eigen::VectorXd integrate_adaptive(
    const std::function<Eigen::VectorXd(double)>& f, double lo, double hi,
    int n_components, const QuadratureSettings& settings = {});

// Composite Simpson on a uniform grid (points made odd if needed); used for
// the fixed-grid spectral integrals.
double simpson_uniform(const std::function<double(double)>& f, double lo,
                       double hi, int points);

}  // namespace joulewire

#endif
