#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sca/numerics.hpp"

namespace sca {

/// Convex feasible set handle. Box and power-simplex sets are first-class;
/// anything else plugs in through a projection (and optionally a linear
/// minimization oracle for vertex-seeking rules).
class FeasibleSet {
 public:
  enum class Kind { Unbounded, Box, PowerSimplex, Custom };

  static FeasibleSet unbounded(Eigen::Index dim);
  static FeasibleSet box(Vector lo, Vector hi);
  /// {x >= 0, sum(x) <= budget}
  static FeasibleSet power_simplex(Eigen::Index dim, double budget);
  static FeasibleSet custom(Eigen::Index dim,
                            std::function<Vector(const Vector&)> project,
                            std::function<Vector(const Vector&)> linear_min = {});

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }

  Vector project(const Vector& x) const;
  /// argmin over the set of c'x; requires a bounded set or a custom oracle.
  Vector linear_min(const Vector& c) const;
  bool contains(const Vector& x, double tol = 1e-9) const;
  bool bounded() const;

  const Vector& lo() const;      // Box only
  const Vector& hi() const;      // Box only
  double budget() const;         // PowerSimplex only

 private:
  FeasibleSet() = default;
  Kind kind_ = Kind::Unbounded;
  Eigen::Index dim_ = 0;
  Vector lo_, hi_;
  double budget_ = 0.0;
  std::function<Vector(const Vector&)> project_;
  std::function<Vector(const Vector&)> linear_min_;
};

/// Differentiable objective over a convex feasible set.
struct SmoothProblem {
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
  FeasibleSet set = FeasibleSet::unbounded(0);
  /// Set when f restricted to any line segment is convex; enables the
  /// bisection-based exact line search.
  bool convex = false;
  /// Lipschitz constant of the gradient when known, 0 otherwise.
  double lipschitz_grad = 0.0;
};

/// f + g with g convex and nonsmooth. The prox oracle solves
/// argmin_{x in X} g(x) + ||x - v||^2 / (2 s) and is what proximal-style
/// rules consume.
struct CompositeProblem {
  SmoothProblem f;
  std::function<double(const Vector&)> g;
  std::function<Vector(const Vector&, double)> prox;
};

/// Midpoint-inequality spot test of the declared convexity of g on random
/// feasible pairs. Used at load time and in property tests.
bool check_midpoint_convexity(const CompositeProblem& p, class Rng& rng,
                              int samples = 64, double tol = 1e-9);

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double gamma = 0.0;
  double error = 0.0;
  double seconds = 0.0;
};

enum class StopReason { Converged, MaxIterations, NonDescentDirection, Diverged };

const char* to_string(StopReason r);

/// Per-iteration log of a solve plus how it terminated.
struct IterateTrace {
  std::vector<TraceRecord> records;
  StopReason reason = StopReason::MaxIterations;
  std::vector<std::string> notices;

  int iterations() const {
    return records.empty() ? 0 : records.back().iter;
  }
  bool converged() const { return reason == StopReason::Converged; }
  double final_objective() const {
    return records.empty() ? 0.0 : records.back().objective;
  }
  double final_error() const {
    return records.empty() ? 0.0 : records.back().error;
  }
  double total_seconds() const {
    return records.empty() ? 0.0 : records.back().seconds;
  }
};

struct SolveResult {
  Vector x;
  IterateTrace trace;
};

}  // namespace sca
