#include "sca/engine.hpp"

#include <chrono>
#include <cmath>

namespace sca {

namespace {

constexpr double kDivergenceGuard = 1e12;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// One loop body serves both problem classes: the smooth path passes a zero
// g so every composite expression collapses to its smooth counterpart
// bit-for-bit.
SolveResult solve_impl(const SmoothProblem& p,
                       const std::function<double(const Vector&)>& g_value,
                       const std::function<Vector(const Vector&)>& best_response,
                       const ApproximationRule& rule, StepsizeRule step,
                       const StopRule& stop, std::optional<Vector> x0) {
  if (!p.value || !p.grad) throw InvalidInput("problem oracles not set");
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult out;
  IterateTrace& trace = out.trace;
  if (!rule.construction_warning.empty()) {
    trace.notices.push_back(rule.construction_warning);
  }

  Vector x = x0 ? std::move(*x0) : p.set.project(Vector::Zero(p.dim));
  if (x.size() != p.dim) throw InvalidInput("start point has wrong dimension");

  double gamma_state = step.gamma0;  // Decreasing variant only
  bool degraded_exact = false;

  for (int t = 0; t <= stop.max_iter; ++t) {
    const double f_only = p.value(x);
    const double fx = f_only + g_value(x);
    if (std::isnan(fx)) throw NumericalBreakdown("numerical breakdown");

    Vector bx;
    try {
      bx = best_response(x);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw SubproblemInfeasible(std::string("subproblem infeasible: ") + e.what());
    }
    if (bx.size() != p.dim || !bx.allFinite()) {
      throw SubproblemInfeasible("subproblem infeasible");
    }
    if (!p.set.contains(bx, 1e-7)) {
      throw SubproblemInfeasible("subproblem infeasible: point outside the set");
    }

    const Vector d = bx - x;
    const double dot = p.grad(x).dot(d);
    const double delta_g = g_value(bx) - g_value(x);
    const double descent = dot + delta_g;
    const double err = stop.residual ? stop.residual(x) : -descent;

    if (descent >= 0.0) {
      trace.records.push_back({t, fx, 0.0, err, seconds_since(t0)});
      const bool domain_converged = stop.residual && err <= stop.tol;
      const bool moved =
          d.cwiseAbs().maxCoeff() > 1e-9 * (1.0 + x.cwiseAbs().maxCoeff());
      if (!domain_converged && moved) {
        // Surrogate minimizer moved without offering descent: the
        // pseudo-convexity premise failed. Recorded, not thrown, so callers
        // can inspect the trace.
        trace.notices.push_back("non-descent direction");
        trace.reason = StopReason::NonDescentDirection;
      } else {
        trace.reason = StopReason::Converged;
      }
      break;
    }
    if (err <= stop.tol) {
      trace.records.push_back({t, fx, 0.0, err, seconds_since(t0)});
      trace.reason = StopReason::Converged;
      break;
    }
    if (t == stop.max_iter) {
      trace.records.push_back({t, fx, 0.0, err, seconds_since(t0)});
      trace.reason = StopReason::MaxIterations;
      break;
    }

    double gamma = 0.0;
    switch (step.kind) {
      case StepsizeRule::Kind::ExactBisection: {
        if (p.convex) {
          const auto dphi = [&](double g) {
            return p.grad(x + g * d).dot(d) + delta_g;
          };
          gamma = dphi(1.0) <= 0.0
                      ? 1.0
                      : bisect_root(dphi, Interval(0.0, 1.0), step.bisect);
        } else {
          if (!degraded_exact) {
            trace.notices.push_back(
                "exact line search unavailable for nonconvex objective; using "
                "successive line search");
            degraded_exact = true;
          }
          gamma = detail::backtrack(p.value, x, d, f_only, dot, delta_g,
                                    step.alpha, step.beta, step.backtrack_cap);
        }
        break;
      }
      case StepsizeRule::Kind::ExactClosedForm:
        if (!step.closed_form) {
          throw InvalidInput("closed-form stepsize hook not set");
        }
        gamma = project_box(step.closed_form(x, bx, delta_g), 0.0, 1.0);
        break;
      case StepsizeRule::Kind::Armijo:
        gamma = detail::backtrack(p.value, x, d, f_only, dot, delta_g,
                                  step.alpha, step.beta, step.backtrack_cap);
        break;
      case StepsizeRule::Kind::Constant:
        gamma = step.constant;
        break;
      case StepsizeRule::Kind::Decreasing:
        gamma = gamma_state;
        gamma_state = gamma_state * (1.0 - step.rate * gamma_state);
        break;
    }

    trace.records.push_back({t, fx, gamma, err, seconds_since(t0)});
    x += gamma * d;
    if (x.cwiseAbs().maxCoeff() > kDivergenceGuard) {
      trace.reason = StopReason::Diverged;
      trace.notices.push_back("iterate magnitude guard tripped");
      break;
    }
  }

  out.x = std::move(x);
  return out;
}

double zero_g(const Vector&) { return 0.0; }

}  // namespace

SolveResult solve_smooth(const SmoothProblem& p, const ApproximationRule& rule,
                         const StepsizeRule& step, const StopRule& stop,
                         std::optional<Vector> x0) {
  if (!rule.smooth) throw InvalidInput("rule has no smooth best response");
  return solve_impl(
      p, zero_g, [&](const Vector& x) { return rule.smooth(p, x); }, rule, step,
      stop, std::move(x0));
}

SolveResult solve_composite(const CompositeProblem& p,
                            const ApproximationRule& rule,
                            const StepsizeRule& step, const StopRule& stop,
                            std::optional<Vector> x0) {
  if (!p.g) throw InvalidInput("composite problem has no g oracle");
  const auto br = [&](const Vector& x) -> Vector {
    if (rule.composite) return rule.composite(p, x);
    if (rule.smooth) return rule.smooth(p.f, x);
    throw InvalidInput("rule has no best response");
  };
  return solve_impl(p.f, p.g, br, rule, step, stop, std::move(x0));
}

double stationarity_error_smooth(const SmoothProblem& p, const Vector& x,
                                 const Vector& bx) {
  return -p.grad(x).dot(bx - x);
}

}  // namespace sca
