#pragma once

#include <functional>
#include <string>

#include "sca/problem.hpp"

namespace sca {

/// Produces the approximate-problem solution Bx around the current iterate.
/// A rule may serve smooth solves, composite solves, or both.
struct ApproximationRule {
  std::string name;
  /// Surrogate globally upper-bounds the objective (safe with constant
  /// gamma = 1).
  bool is_upper_bound = false;
  /// Block-separable best response; blocks may be evaluated concurrently.
  bool block_parallel = false;
  /// Worker count for block-parallel evaluation (1 = sequential).
  int workers = 1;
  /// Non-fatal condition detected at construction (e.g. a proximal step
  /// larger than 1/L); surfaced through trace notices.
  std::string construction_warning;

  std::function<Vector(const SmoothProblem&, const Vector&)> smooth;
  std::function<Vector(const CompositeProblem&, const Vector&)> composite;
  /// Surrogate value at (x; xt) when the rule has a natural one; used by
  /// upper-bound property tests.
  std::function<double(const SmoothProblem&, const Vector&, const Vector&)>
      surrogate;
};

namespace rules {

/// First-order surrogate; Bx is a vertex of the (bounded) feasible set.
ApproximationRule conditional_gradient();

/// Bx = P_X(x - s * grad f(x)).
ApproximationRule gradient_projection(double s);

/// Diagonal-metric variant: Bx_i = clamp(x_i - grad_i / h_i); box sets only.
ApproximationRule gradient_projection_scaled(Vector h);

/// Composite rule Bx = prox_{s g}(x - s * grad f(x)). When the gradient's
/// Lipschitz constant is declared on the problem and s > 1/L, the surrogate
/// is not a global upper bound and a construction warning is set.
ApproximationRule proximal_gradient(double s, double declared_lipschitz = 0.0);

/// Coordinate-wise best response against the frozen iterate with proximal
/// weight tau >= 0 (tau = 0 is the plain Jacobi update). Box sets only.
ApproximationRule jacobi(double tau = 0.0, int workers = 1);

/// Difference-of-convex linearization: minimizes
/// f1(x) - grad f2(xt)' x over the feasible set through the supplied hook
/// argmin_hook(c, xt) = argmin_{x in X} f1(x) + c'x. Sets is_upper_bound.
ApproximationRule dc_linearize(
    std::function<double(const Vector&)> f1,
    std::function<double(const Vector&)> f2,
    std::function<Vector(const Vector&)> grad_f2,
    std::function<Vector(const Vector&, const Vector&)> argmin_hook);

}  // namespace rules

}  // namespace sca
