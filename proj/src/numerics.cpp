#include "sca/numerics.hpp"

#include <cmath>

namespace sca {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi) {
    throw InvalidInput("interval endpoints must be finite with lo <= hi");
  }
}

namespace {

double eval_checked(const std::function<double(double)>& g, double x) {
  const double v = g(x);
  if (std::isnan(v)) throw InvalidFunctionValue("invalid function value");
  return v;
}

}  // namespace

double bisect_root(const std::function<double(double)>& g, Interval iv,
                   BisectOptions opt) {
  double lo = iv.lo;
  double hi = iv.hi;
  const double glo = eval_checked(g, lo);
  if (std::abs(glo) <= opt.tol) return lo;
  const double ghi = eval_checked(g, hi);
  if (std::abs(ghi) <= opt.tol) return hi;
  if (glo > 0.0 || ghi < 0.0) throw NoBracket("no bracket");

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < opt.max_iter && hi - lo > opt.tol; ++it) {
    mid = 0.5 * (lo + hi);
    const double gm = eval_checked(g, mid);
    if (std::abs(gm) <= opt.tol) return mid;
    if (gm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Vector project_box(const Vector& x, const Vector& lo, const Vector& hi) {
  if (x.size() != lo.size() || x.size() != hi.size()) {
    throw InvalidInput("project_box: dimension mismatch");
  }
  return x.cwiseMin(hi).cwiseMax(lo);
}

double project_box(double x, double lo, double hi) {
  return std::max(std::min(x, hi), lo);
}

Vector soft_threshold(const Vector& b, const Vector& a) {
  if (b.size() != a.size()) {
    throw InvalidInput("soft_threshold: dimension mismatch");
  }
  if ((a.array() < 0.0).any()) {
    throw InvalidInput("soft_threshold: thresholds must be nonnegative");
  }
  return (b - a).cwiseMax(0.0) - (-b - a).cwiseMax(0.0);
}

double soft_threshold(double b, double a) {
  if (a < 0.0) throw InvalidInput("soft_threshold: thresholds must be nonnegative");
  return std::max(b - a, 0.0) - std::max(-b - a, 0.0);
}

double check_gradient(const std::function<double(const Vector&)>& f,
                      const std::function<Vector(const Vector&)>& grad,
                      const Vector& x, double h) {
  const Vector g = grad(x);
  double worst = 0.0;
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    const double num = (fp - fm) / (2.0 * h);
    const double dev =
        std::abs(num - g(i)) / std::max({1.0, std::abs(num), std::abs(g(i))});
    if (!(dev <= worst)) worst = dev;  // keeps NaN as the failure value
  }
  return worst;
}

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  if (!(lo <= hi)) throw InvalidInput("golden_section_min: lo > hi");
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace sca
