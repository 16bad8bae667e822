#include "sca/stepsize.hpp"

#include <cmath>

namespace sca {

StepsizeRule StepsizeRule::armijo(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) {
    throw InvalidInput("armijo: alpha and beta must lie in (0, 1)");
  }
  StepsizeRule r;
  r.kind = Kind::Armijo;
  r.alpha = alpha;
  r.beta = beta;
  return r;
}

StepsizeRule StepsizeRule::constant_step(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidInput("constant step must lie in (0, 1]");
  }
  StepsizeRule r;
  r.kind = Kind::Constant;
  r.constant = gamma;
  return r;
}

StepsizeRule StepsizeRule::decreasing(double gamma0, double rate) {
  if (!(gamma0 > 0.0 && gamma0 <= 1.0) || rate < 0.0) {
    throw InvalidInput("decreasing: gamma0 in (0, 1], rate >= 0");
  }
  StepsizeRule r;
  r.kind = Kind::Decreasing;
  r.gamma0 = gamma0;
  r.rate = rate;
  return r;
}

StepsizeRule StepsizeRule::closed_form_hook(
    std::function<double(const Vector&, const Vector&, double)> fn) {
  StepsizeRule r;
  r.kind = Kind::ExactClosedForm;
  r.closed_form = std::move(fn);
  return r;
}

namespace detail {

double backtrack(const std::function<double(const Vector&)>& f, const Vector& x,
                 const Vector& d, double fx, double dot, double delta_g,
                 double alpha, double beta, int cap) {
  double gamma = 1.0;
  for (int m = 0; m <= cap; ++m) {
    const double lhs = f(x + gamma * d) - fx;
    const double rhs = gamma * (alpha * dot + (alpha - 1.0) * delta_g);
    if (lhs <= rhs) return gamma;
    gamma *= beta;
  }
  throw LineSearchStalled("line search stalled");
}

}  // namespace detail

namespace {

double exact_over_differentiable(const SmoothProblem& p, const Vector& x,
                                 const Vector& d, double delta_g,
                                 double descent, BisectOptions opt,
                                 std::vector<std::string>* notices,
                                 const std::function<double(const Vector&)>& full_f) {
  if (!(descent < 0.0)) {
    throw NotDescentDirection("not a descent direction");
  }
  if (!p.convex) {
    if (notices) {
      notices->push_back(
          "exact line search unavailable for nonconvex objective; using "
          "successive line search");
    }
    const double fx = full_f(x);
    return detail::backtrack(full_f, x, d, fx, descent - delta_g, delta_g, 0.25,
                             0.5, 60);
  }
  const auto dphi = [&](double gamma) {
    return p.grad(x + gamma * d).dot(d) + delta_g;
  };
  if (dphi(1.0) <= 0.0) return 1.0;  // still descending at the boundary
  return bisect_root(dphi, Interval(0.0, 1.0), opt);
}

}  // namespace

double exact_linesearch_smooth(const SmoothProblem& p, const Vector& x,
                               const Vector& d, BisectOptions opt,
                               std::vector<std::string>* notices) {
  const double dot = p.grad(x).dot(d);
  return exact_over_differentiable(p, x, d, 0.0, dot, opt, notices, p.value);
}

double exact_linesearch_composite(const CompositeProblem& p, const Vector& x,
                                  const Vector& bx, BisectOptions opt,
                                  std::vector<std::string>* notices) {
  const Vector d = bx - x;
  const double delta_g = p.g(bx) - p.g(x);
  const double descent = p.f.grad(x).dot(d) + delta_g;
  return exact_over_differentiable(p.f, x, d, delta_g, descent, opt, notices,
                                   p.f.value);
}

double armijo_smooth(const SmoothProblem& p, const Vector& x, const Vector& d,
                     double alpha, double beta, int cap) {
  const double dot = p.grad(x).dot(d);
  if (!(dot < 0.0)) throw NotDescentDirection("not a descent direction");
  return detail::backtrack(p.value, x, d, p.value(x), dot, 0.0, alpha, beta, cap);
}

double armijo_composite(const CompositeProblem& p, const Vector& x,
                        const Vector& bx, double alpha, double beta, int cap) {
  const Vector d = bx - x;
  const double delta_g = p.g(bx) - p.g(x);
  const double dot = p.f.grad(x).dot(d);
  if (!(dot + delta_g < 0.0)) {
    throw NotDescentDirection("not a descent direction");
  }
  return detail::backtrack(p.f.value, x, d, p.f.value(x), dot, delta_g, alpha,
                           beta, cap);
}

}  // namespace sca
