#include "sca/rules.hpp"

#include <cmath>
#include <utility>

#include "sca/parallel.hpp"

namespace sca::rules {

ApproximationRule conditional_gradient() {
  ApproximationRule r;
  r.name = "conditional-gradient";
  r.smooth = [](const SmoothProblem& p, const Vector& x) {
    return p.set.linear_min(p.grad(x));
  };
  r.surrogate = [](const SmoothProblem& p, const Vector& x, const Vector& xt) {
    return p.grad(xt).dot(x - xt);
  };
  return r;
}

ApproximationRule gradient_projection(double s) {
  if (!(s > 0.0)) throw InvalidInput("gradient_projection: s must be positive");
  ApproximationRule r;
  r.name = "gradient-projection";
  r.smooth = [s](const SmoothProblem& p, const Vector& x) {
    const Vector v = x - s * p.grad(x);
    return p.set.project(v);
  };
  r.surrogate = [s](const SmoothProblem& p, const Vector& x, const Vector& xt) {
    const Vector d = x - xt;
    return p.grad(xt).dot(d) + d.squaredNorm() / (2.0 * s);
  };
  return r;
}

ApproximationRule gradient_projection_scaled(Vector h) {
  if ((h.array() <= 0.0).any()) {
    throw InvalidInput("gradient_projection_scaled: h must be positive");
  }
  ApproximationRule r;
  r.name = "gradient-projection-scaled";
  r.smooth = [h = std::move(h)](const SmoothProblem& p, const Vector& x) {
    if (p.set.kind() != FeasibleSet::Kind::Box) {
      throw InvalidInput("scaled gradient projection requires a box set");
    }
    const Vector v = x - p.grad(x).cwiseQuotient(h);
    return project_box(v, p.set.lo(), p.set.hi());
  };
  return r;
}

ApproximationRule proximal_gradient(double s, double declared_lipschitz) {
  if (!(s > 0.0)) throw InvalidInput("proximal_gradient: s must be positive");
  ApproximationRule r;
  r.name = "proximal-gradient";
  if (declared_lipschitz > 0.0) {
    if (s > 1.0 / declared_lipschitz) {
      r.construction_warning = "upper-bound property not guaranteed";
    } else {
      r.is_upper_bound = true;
    }
  }
  r.composite = [s](const CompositeProblem& p, const Vector& x) {
    if (!p.prox) throw InvalidInput("proximal rule requires a prox oracle");
    const Vector v = x - s * p.f.grad(x);
    return p.prox(v, s);
  };
  r.surrogate = [s](const SmoothProblem& p, const Vector& x, const Vector& xt) {
    const Vector d = x - xt;
    return p.value(xt) + p.grad(xt).dot(d) + d.squaredNorm() / (2.0 * s);
  };
  return r;
}

ApproximationRule jacobi(double tau, int workers) {
  if (tau < 0.0) throw InvalidInput("jacobi: tau must be nonnegative");
  ApproximationRule r;
  r.name = "jacobi";
  r.block_parallel = true;
  r.workers = workers;
  r.smooth = [tau, workers](const SmoothProblem& p, const Vector& x) {
    if (p.set.kind() != FeasibleSet::Kind::Box || !p.set.bounded()) {
      throw InvalidInput("jacobi rule requires a bounded box set");
    }
    const Vector& lo = p.set.lo();
    const Vector& hi = p.set.hi();
    Vector bx = x;
    parallel_for(x.size(), workers, [&](Eigen::Index k) {
      Vector probe = x;  // frozen iterate, one mutable coordinate
      const auto component = [&](double v) {
        probe(k) = v;
        const double reg = 0.5 * tau * (v - x(k)) * (v - x(k));
        const double val = p.value(probe) + reg;
        probe(k) = x(k);
        return val;
      };
      const double width = hi(k) - lo(k);
      bx(k) = golden_section_min(component, lo(k), hi(k),
                                 1e-11 * (1.0 + width));
    });
    return bx;
  };
  return r;
}

ApproximationRule dc_linearize(
    std::function<double(const Vector&)> f1, std::function<double(const Vector&)> f2,
    std::function<Vector(const Vector&)> grad_f2,
    std::function<Vector(const Vector&, const Vector&)> argmin_hook) {
  if (!f1 || !f2 || !grad_f2 || !argmin_hook) {
    throw InvalidInput("dc_linearize: all oracles are required");
  }
  ApproximationRule r;
  r.name = "dc-linearize";
  r.is_upper_bound = true;
  r.smooth = [grad_f2, argmin_hook](const SmoothProblem&, const Vector& x) {
    const Vector c = -grad_f2(x);
    return argmin_hook(c, x);
  };
  r.surrogate = [f1, f2, grad_f2](const SmoothProblem&, const Vector& x,
                                  const Vector& xt) {
    return f1(x) - f2(xt) - grad_f2(xt).dot(x - xt);
  };
  return r;
}

}  // namespace sca::rules
