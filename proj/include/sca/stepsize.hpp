#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sca/problem.hpp"

namespace sca {

/// Stepsize selection for the iterate update x + gamma * (Bx - x).
struct StepsizeRule {
  enum class Kind {
    ExactBisection,   // minimize along the direction, derivative bisection
    ExactClosedForm,  // application-supplied closed form
    Armijo,           // successive line search (composite-aware in f+g solves)
    Constant,
    Decreasing,       // gamma_{t+1} = gamma_t * (1 - rate * gamma_t)
  };

  Kind kind = Kind::ExactBisection;
  double alpha = 0.25;
  double beta = 0.5;
  int backtrack_cap = 60;
  double constant = 1.0;
  double gamma0 = 0.9;
  double rate = 0.01;
  BisectOptions bisect{};
  /// Hook for ExactClosedForm: (x, Bx, g(Bx) - g(x)) -> gamma in [0, 1].
  std::function<double(const Vector&, const Vector&, double)> closed_form;

  static StepsizeRule exact() { return {}; }
  static StepsizeRule armijo(double alpha = 0.25, double beta = 0.5);
  static StepsizeRule constant_step(double gamma);
  static StepsizeRule decreasing(double gamma0, double rate);
  static StepsizeRule closed_form_hook(
      std::function<double(const Vector&, const Vector&, double)> fn);
};

/// Exact line search of f along a descent direction d over [0, 1].
///
/// For convex objectives the directional derivative is nondecreasing in gamma
/// and the minimizer is found by bisection (gamma = 1 when the derivative is
/// still negative there). Nonconvex objectives degrade to the successive line
/// search; a notice is appended when a sink is given.
double exact_linesearch_smooth(const SmoothProblem& p, const Vector& x,
                               const Vector& d, BisectOptions opt = {},
                               std::vector<std::string>* notices = nullptr);

/// Composite variant minimizing f(x + gamma d) + gamma * (g(Bx) - g(x)).
double exact_linesearch_composite(const CompositeProblem& p, const Vector& x,
                                  const Vector& bx, BisectOptions opt = {},
                                  std::vector<std::string>* notices = nullptr);

/// Successive (Armijo) line search: gamma = beta^m with the smallest m such
/// that f(x + gamma d) <= f(x) + alpha * gamma * grad'd.
double armijo_smooth(const SmoothProblem& p, const Vector& x, const Vector& d,
                     double alpha = 0.25, double beta = 0.5, int cap = 60);

/// Nonsmooth successive line search over the differentiable part only:
/// f(x + gamma d) - f(x) <= gamma * (alpha grad'd + (alpha-1)(g(Bx) - g(x))).
double armijo_composite(const CompositeProblem& p, const Vector& x,
                        const Vector& bx, double alpha = 0.25,
                        double beta = 0.5, int cap = 60);

namespace detail {

/// Shared backtracking core; the smooth path passes delta_g = 0 so both
/// spec'd searches are the same arithmetic.
double backtrack(const std::function<double(const Vector&)>& f, const Vector& x,
                 const Vector& d, double fx, double dot, double delta_g,
                 double alpha, double beta, int cap);

}  // namespace detail

}  // namespace sca
