#pragma once

#include <optional>

#include "sca/problem.hpp"
#include "sca/rules.hpp"
#include "sca/stepsize.hpp"

namespace sca {

struct StopRule {
  double tol = 1e-6;
  int max_iter = 1000;
  /// Optional domain-specific convergence metric evaluated at each iterate;
  /// when set it replaces the surrogate-gap error in the stopping test and in
  /// the trace's error column.
  std::function<double(const Vector&)> residual;
};

/// Iterates x <- x + gamma (Bx - x) for a differentiable objective until the
/// stationarity error -grad'(Bx - x) (or the custom residual) drops below
/// tol. Starts from the projection of zero unless x0 is given.
SolveResult solve_smooth(const SmoothProblem& p, const ApproximationRule& rule,
                         const StepsizeRule& step, const StopRule& stop,
                         std::optional<Vector> x0 = std::nullopt);

/// Composite variant for f + g; the objective recorded is f(x) + g(x) (the
/// auxiliary bound variable is collapsed to g(x) after every update) and the
/// descent measure is grad f'(Bx - x) + g(Bx) - g(x).
SolveResult solve_composite(const CompositeProblem& p,
                            const ApproximationRule& rule,
                            const StepsizeRule& step, const StopRule& stop,
                            std::optional<Vector> x0 = std::nullopt);

/// Surrogate-gap stationarity measure e = -grad f(x)'(Bx - x); zero exactly
/// at stationary points, positive along strict descent directions.
double stationarity_error_smooth(const SmoothProblem& p, const Vector& x,
                                 const Vector& bx);

}  // namespace sca
