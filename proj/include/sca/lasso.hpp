#pragma once

#include <cstdint>
#include <optional>

#include "sca/problem.hpp"

namespace sca::lasso {

/// l1-regularized least squares data: minimize 0.5 ||A x - b||^2 + mu ||x||_1.
struct LassoInstance {
  Matrix A;
  Vector b;
  double mu = 0.0;

  /// Throws InvalidInput / DegenerateColumn when mu <= 0, the shapes do not
  /// line up, or a column of A is identically zero.
  void validate() const;

  static LassoInstance random(Eigen::Index n, Eigen::Index k, double density,
                              double noise_var, double mu_factor,
                              std::uint64_t seed);
};

/// Solver state: iterate, maintained residual s = A x - b, and the cached
/// squared column norms diag(A'A).
struct StelaState {
  Vector x;
  Vector s;
  Vector col_norms2;

  static StelaState init(const LassoInstance& inst,
                         std::optional<Vector> x0 = std::nullopt);
};

/// Parallel scalar best response: Bx = S_mu(r(x)) / diag(A'A) with
/// r(x) = diag(A'A) o x - A'(A x - b). Every component solves its scalar
/// subproblem exactly.
Vector stela_best_response(const StelaState& st, const LassoInstance& inst,
                           int workers = 1);

/// Closed-form exact stepsize over the differentiable surrogate,
/// clamped to [0, 1]. A null-space direction (A(Bx - x) = 0 with Bx != x)
/// returns 1 when the direction still decreases the objective, else 0.
double stela_stepsize(const StelaState& st, const Vector& bx,
                      const LassoInstance& inst);

/// Optimality residual e(x) = || grad f(x) - clamp(grad f(x) - x, -mu, mu) ||;
/// zero exactly at LASSO solutions.
double lasso_error(const Vector& x, const LassoInstance& inst);

struct StelaOptions {
  double err_tol = 1e-6;
  int max_iter = 2000;
  int resync_every = 500;  // bounds residual-recursion drift
  int workers = 1;
};

/// Soft-thresholding best response plus closed-form exact line search; the
/// residual follows the recursion s <- s + gamma A (Bx - x).
SolveResult stela_solve(const LassoInstance& inst, const StelaOptions& opt = {},
                        std::optional<Vector> x0 = std::nullopt);

/// Same best response driven by the decreasing-stepsize schedule
/// gamma <- gamma (1 - min(1, 1e-4 / e(x)) d gamma); comparison baseline only.
SolveResult flexa_baseline(const LassoInstance& inst, double decrease_rate,
                           double gamma0 = 0.9, const StelaOptions& opt = {});

struct BpOptions {
  int outer_cap = 50;
  double lambda_tol = 1e-6;   // relative multiplier-change tolerance
  double inner_err_tol = 1e-9;
  int inner_max_iter = 5000;
  int workers = 1;
};

struct BpResult {
  Vector x;
  Vector lambda;
  bool converged = false;
  double feasibility = 0.0;  // ||A x - b||
  int outer_iterations = 0;
};

/// Basis pursuit (min ||x||_1 s.t. Ax = b) by an augmented-Lagrangian outer
/// loop whose subproblems are LASSO instances in a shifted variable, solved
/// by STELA. Reports the best feasibility residual when b is unreachable.
BpResult basis_pursuit_solve(const Matrix& A, const Vector& b,
                             const BpOptions& opt = {});

}  // namespace sca::lasso
