#include "sca/problem.hpp"

#include <cmath>

#include "sca/rng.hpp"

namespace sca {

FeasibleSet FeasibleSet::unbounded(Eigen::Index dim) {
  FeasibleSet s;
  s.kind_ = Kind::Unbounded;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw InvalidInput("box: dimension mismatch");
  if ((lo.array() > hi.array()).any()) throw InvalidInput("box: lo > hi");
  FeasibleSet s;
  s.kind_ = Kind::Box;
  s.dim_ = lo.size();
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::power_simplex(Eigen::Index dim, double budget) {
  if (budget <= 0.0) throw InvalidInput("power_simplex: budget must be positive");
  FeasibleSet s;
  s.kind_ = Kind::PowerSimplex;
  s.dim_ = dim;
  s.budget_ = budget;
  return s;
}

FeasibleSet FeasibleSet::custom(Eigen::Index dim,
                                std::function<Vector(const Vector&)> project,
                                std::function<Vector(const Vector&)> linear_min) {
  if (!project) throw InvalidInput("custom set requires a projection");
  FeasibleSet s;
  s.kind_ = Kind::Custom;
  s.dim_ = dim;
  s.project_ = std::move(project);
  s.linear_min_ = std::move(linear_min);
  return s;
}

Vector FeasibleSet::project(const Vector& x) const {
  if (x.size() != dim_) throw InvalidInput("project: dimension mismatch");
  switch (kind_) {
    case Kind::Unbounded:
      return x;
    case Kind::Box:
      return project_box(x, lo_, hi_);
    case Kind::PowerSimplex: {
      Vector clipped = x.cwiseMax(0.0);
      if (clipped.sum() <= budget_) return clipped;
      // Water level theta solving sum([x - theta]+) = budget.
      const double top = x.maxCoeff();
      const auto excess = [&](double theta) {
        return budget_ - (x.array() - theta).cwiseMax(0.0).sum();
      };
      const double theta =
          bisect_root(excess, Interval(0.0, top), {1e-12 * (1.0 + budget_), 200});
      return (x.array() - theta).cwiseMax(0.0).matrix();
    }
    case Kind::Custom:
      return project_(x);
  }
  throw Error("unreachable");
}

Vector FeasibleSet::linear_min(const Vector& c) const {
  if (c.size() != dim_) throw InvalidInput("linear_min: dimension mismatch");
  switch (kind_) {
    case Kind::Box: {
      if (!bounded()) throw InvalidInput("linear_min: box is unbounded");
      Vector v(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) {
        v(i) = c(i) > 0.0 ? lo_(i) : hi_(i);
      }
      return v;
    }
    case Kind::PowerSimplex: {
      Vector v = Vector::Zero(dim_);
      Eigen::Index best = 0;
      const double cmin = c.minCoeff(&best);
      if (cmin < 0.0) v(best) = budget_;
      return v;
    }
    case Kind::Custom:
      if (linear_min_) return linear_min_(c);
      throw InvalidInput("linear_min: no oracle for custom set");
    case Kind::Unbounded:
      break;
  }
  throw InvalidInput("linear_min: set is unbounded");
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::Unbounded:
      return true;
    case Kind::Box: {
      const double scale = 1.0 + x.cwiseAbs().maxCoeff();
      return ((x - lo_).array() >= -tol * scale).all() &&
             ((hi_ - x).array() >= -tol * scale).all();
    }
    case Kind::PowerSimplex:
      return (x.array() >= -tol * (1.0 + budget_)).all() &&
             x.sum() <= budget_ * (1.0 + tol) + tol;
    case Kind::Custom:
      return (x - project_(x)).cwiseAbs().maxCoeff() <=
             tol * (1.0 + x.cwiseAbs().maxCoeff());
  }
  return false;
}

bool FeasibleSet::bounded() const {
  switch (kind_) {
    case Kind::Box:
      return lo_.allFinite() && hi_.allFinite();
    case Kind::PowerSimplex:
      return true;
    default:
      return false;
  }
}

const Vector& FeasibleSet::lo() const {
  if (kind_ != Kind::Box) throw InvalidInput("lo(): not a box set");
  return lo_;
}

const Vector& FeasibleSet::hi() const {
  if (kind_ != Kind::Box) throw InvalidInput("hi(): not a box set");
  return hi_;
}

double FeasibleSet::budget() const {
  if (kind_ != Kind::PowerSimplex) throw InvalidInput("budget(): not a power simplex");
  return budget_;
}

bool check_midpoint_convexity(const CompositeProblem& p, Rng& rng, int samples,
                              double tol) {
  const Eigen::Index n = p.f.dim;
  for (int s = 0; s < samples; ++s) {
    Vector a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i) = rng.uniform(-10.0, 10.0);
      b(i) = rng.uniform(-10.0, 10.0);
    }
    a = p.f.set.project(a);
    b = p.f.set.project(b);
    const double mid = p.g(0.5 * (a + b));
    const double avg = 0.5 * (p.g(a) + p.g(b));
    if (mid > avg + tol * (1.0 + std::abs(avg))) return false;
  }
  return true;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged:
      return "converged";
    case StopReason::MaxIterations:
      return "max iterations";
    case StopReason::NonDescentDirection:
      return "non-descent direction";
    case StopReason::Diverged:
      return "diverged";
  }
  return "unknown";
}

}  // namespace sca
