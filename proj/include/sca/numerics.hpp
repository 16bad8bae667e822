#pragma once

#include <Eigen/Dense>
#include <functional>

#include "sca/errors.hpp"

namespace sca {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed interval with finite endpoints, lo <= hi.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_);
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

struct BisectOptions {
  double tol = 1e-8;
  int max_iter = 64;
};

/// Root of a nondecreasing scalar function by interval halving.
///
/// Stops once the bracket width or |g| at the midpoint falls below tol, never
/// performing more than max_iter halvings. Requires g(lo) <= 0 <= g(hi) up to
/// tol (an endpoint with |g| <= tol is returned directly).
double bisect_root(const std::function<double(double)>& g, Interval iv,
                   BisectOptions opt = {});

/// Element-wise projection onto [lo, hi].
Vector project_box(const Vector& x, const Vector& lo, const Vector& hi);
double project_box(double x, double lo, double hi);

/// Shrinkage operator [b-a]+ - [-b-a]+ with thresholds a >= 0.
Vector soft_threshold(const Vector& b, const Vector& a);
double soft_threshold(double b, double a);

/// Worst relative deviation between an analytic gradient and central
/// differences with step h. NaN oracles propagate as NaN.
double check_gradient(const std::function<double(const Vector&)>& f,
                      const std::function<Vector(const Vector&)>& grad,
                      const Vector& x, double h = 1e-5);

/// Minimize a unimodal scalar function on [lo, hi] by golden-section search.
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-10);

}  // namespace sca
