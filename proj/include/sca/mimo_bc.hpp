#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sca/hermitian.hpp"
#include "sca/problem.hpp"

namespace sca::mimo {

/// Broadcast-channel data: per-user channels H_k (nR x nT) and the sum power
/// budget in linear scale.
struct MimoBcInstance {
  int users = 0;
  int tx = 0;
  int rx = 0;
  double power = 0.0;  // linear
  std::vector<CMatrix> H;

  void validate() const;
  static MimoBcInstance random(int users, int tx, int rx, double power_db,
                               std::uint64_t seed);
};

/// K transmit covariance matrices, Hermitian PSD with sum trace <= power.
using CovariancePoint = std::vector<CMatrix>;

CovariancePoint zero_point(const MimoBcInstance& inst);

/// Throws unless every Q_k is Hermitian PSD (eigenvalues >= -1e-9 * scale)
/// and the total power fits the budget with 1e-9 slack.
void validate_covariance(const CovariancePoint& q, const MimoBcInstance& inst);

/// Eigenvalues below -1e-9 * scale are hard errors, tiny negatives are
/// clipped to zero.
void psd_repair(CovariancePoint& q);

/// Sum rate log det(I + sum_k H_k Q_k H_k^H).
double bc_objective(const CovariancePoint& q, const MimoBcInstance& inst);

/// Gradients H_k^H M^{-1} H_k of the sum rate, M = I + sum H Q H^H.
std::vector<CMatrix> bc_gradient(const CovariancePoint& q,
                                 const MimoBcInstance& inst);

/// Single-user waterfilling: maximizes log|R + H Q H^H| - lambda tr(Q) over
/// PSD Q. Eigen-directions of H^H R^{-1} H are filled up to level 1/lambda.
CMatrix waterfill_user(const CMatrix& h, const CMatrix& r, double lambda);

/// Best response of the per-user concave surrogate under the sum power
/// budget, found by bisecting the multiplier of the power constraint.
CovariancePoint bc_best_response(const CovariancePoint& q,
                                 const MimoBcInstance& inst,
                                 double* lambda_out = nullptr, int workers = 1);

/// Surrogate-gap error Re tr(grad f(Q) (BQ - Q)).
double bc_error(const CovariancePoint& q, const CovariancePoint& bq,
                const MimoBcInstance& inst);

enum class BcStep {
  ExactBisection,        // exact line search on the concave restriction
  FixedInverseK,         // gamma = 1/K baseline
  RegularizedDecreasing, // tau-regularized surrogate + decreasing stepsize
};

struct BcOptions {
  BcStep step = BcStep::ExactBisection;
  double tol = 1e-4;  // on the surrogate-gap error
  int max_iter = 200;
  int workers = 1;
  // RegularizedDecreasing only:
  double tau = 1e-5;
  double decrease_rate = 0.01;
  double gamma0 = 1.0;
};

struct BcResult {
  CovariancePoint Q;
  double sum_rate = 0.0;
  IterateTrace trace;
  std::vector<double> sum_rates;  // per recorded iteration
};

BcResult bc_solve(const MimoBcInstance& inst, const BcOptions& opt = {});

}  // namespace sca::mimo
