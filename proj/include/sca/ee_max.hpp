#pragma once

#include <cstdint>
#include <optional>

#include "sca/engine.hpp"
#include "sca/problem.hpp"

namespace sca::ee {

/// Power-control data for the uplink energy-efficiency problem: gains w_kj,
/// hardware-impairment coefficients phi_k, noise powers sigma2_k, circuit
/// power Pc and per-user power bounds.
struct EeInstance {
  int users = 0;
  Matrix w;        // K x K, w(k, j)
  Vector phi;      // K
  Vector sigma2;   // K
  double Pc = 0.0;
  Vector pmin;
  Vector pmax;

  void validate() const;
  /// Finite-difference check of the analytic objective and cross gradients
  /// at a random feasible point; throws on deviation > 1e-5.
  void self_test(std::uint64_t seed = 0x5eedULL) const;

  /// Massive-MIMO style random instance: i.i.d. CN(0,1) channels of length
  /// antennas per (cell, user) pair; dBm powers map to linear units with
  /// 0 dBm = 1.
  static EeInstance random(int users, int antennas, double epsilon,
                           std::uint64_t seed);
};

/// Per-user transmission rate r_k(p).
Vector ee_rates(const Vector& p, const EeInstance& inst);

/// Energy efficiency sum r_k(p) / (Pc + sum p).
double ee_objective(const Vector& p, const EeInstance& inst);
Vector ee_gradient(const Vector& p, const EeInstance& inst);

/// Quantities derived from the frozen iterate that each user's subproblem
/// consumes: interference level and the aggregated cross gradient
/// sum_{j != k} d r_j / d p_k (always <= 0).
struct UserLocal {
  double interference = 0.0;   // sigma_k^2 + sum_{j != k} w_kj p_j
  double cross_gradient = 0.0; // pi_k
  double others_rate = 0.0;    // sum_{j != k} r_j(p^t)
  double others_power = 0.0;   // sum_{j != k} p_j^t
};

UserLocal user_local(int k, const Vector& pt, const EeInstance& inst);

/// Value of the pseudo-concave surrogate at p around pt.
double ee_surrogate(const Vector& p, const Vector& pt, const EeInstance& inst);

/// Gradient of the surrogate (separable across users).
Vector ee_surrogate_gradient(const Vector& p, const Vector& pt,
                             const EeInstance& inst);

/// Closed-form maximizer of the parametric subproblem
///   maximize  log(1 + w p / (interference + phi p)) + nu * p
/// over [lo, hi], where nu aggregates the linearized cross terms minus the
/// Dinkelbach level. Implemented as the box-projected positive root of the
/// order-2 stationarity polynomial.
double parametric_power(double interference, double phi, double w, double nu,
                        double lo, double hi);

struct DinkelbachResult {
  double p = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

/// Maximizes user k's surrogate ratio over [pmin_k, pmax_k] by Dinkelbach's
/// parametric iteration. Each parametric subproblem is solved by the
/// closed-form projected root of its stationarity quadratic, guarded by a
/// derivative check with bisection fallback.
DinkelbachResult dinkelbach_user(int k, const Vector& pt, const EeInstance& inst,
                                 double tol = 1e-5, int max_iter = 100);

/// All K best responses against the frozen iterate (parallelizable).
Vector ee_best_response(const Vector& pt, const EeInstance& inst,
                        int workers = 1, bool* fallback_used = nullptr);

/// Projected-gradient residual ||p - clamp(p + grad, pmin, pmax)||_inf of the
/// maximization box KKT conditions.
double ee_kkt_residual(const Vector& p, const EeInstance& inst);

struct EeOptions {
  double kkt_tol = 1e-5;
  int max_iter = 200;
  double armijo_alpha = 0.25;
  double armijo_beta = 0.5;
  int workers = 1;
};

struct EeResult {
  Vector p;
  double ee = 0.0;
  IterateTrace trace;
  std::vector<double> ee_values;  // per recorded iteration
};

/// Parallel per-user Dinkelbach best responses combined with the successive
/// line search, run through the generic iteration engine (maximization is
/// negated into its minimization convention). Starts at pmin.
EeResult ee_solve(const EeInstance& inst, const EeOptions& opt = {});

}  // namespace sca::ee
