#include "sca/mimo_bc.hpp"

#include <chrono>
#include <cmath>

#include "sca/numerics.hpp"
#include "sca/parallel.hpp"
#include "sca/rng.hpp"

namespace sca::mimo {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

CMatrix hermitianize(const CMatrix& m) { return 0.5 * (m + m.adjoint().eval()); }

double logdet_hpd(const CMatrix& m) {
  const Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalBreakdown("log det: matrix not positive definite");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    acc += std::log(llt.matrixL()(i, i).real());
  }
  return 2.0 * acc;
}

CMatrix interference_matrix(const CovariancePoint& q, const MimoBcInstance& inst) {
  CMatrix m = CMatrix::Identity(inst.rx, inst.rx);
  for (int k = 0; k < inst.users; ++k) {
    m += inst.H[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(k)] *
         inst.H[static_cast<std::size_t>(k)].adjoint();
  }
  return hermitianize(m);
}

double total_power(const CovariancePoint& q) {
  double acc = 0.0;
  for (const auto& qk : q) acc += qk.trace().real();
  return acc;
}

// Spectra of H_k^H R_k^{-1} H_k, cached so the multiplier bisection reuses
// them across water levels.
struct UserSpectrum {
  Eigen::VectorXd sigma;
  CMatrix vectors;
};

CMatrix allocate(const UserSpectrum& sp, double lambda) {
  const Eigen::Index n = sp.sigma.size();
  Eigen::VectorXd fill(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = sp.sigma(i);
    fill(i) = s > 1e-14 ? std::max(1.0 / lambda - 1.0 / s, 0.0) : 0.0;
  }
  return sp.vectors * fill.asDiagonal() * sp.vectors.adjoint();
}

UserSpectrum user_spectrum(const CMatrix& h, const CMatrix& r) {
  const Eigen::LLT<CMatrix> llt(hermitianize(r));
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("waterfilling: R must be positive definite");
  }
  const CMatrix z = hermitianize(h.adjoint() * llt.solve(h));
  const EigResult eig = hermitian_eig(z);
  return {eig.values, eig.vectors};
}

}  // namespace

void MimoBcInstance::validate() const {
  if (users <= 0 || tx <= 0 || rx <= 0) throw InvalidInput("mimo: bad dimensions");
  if (!(power > 0.0)) throw InvalidInput("mimo: power must be positive");
  if (static_cast<int>(H.size()) != users) {
    throw InvalidInput("mimo: channel count != users");
  }
  for (const auto& h : H) {
    if (h.rows() != rx || h.cols() != tx) {
      throw InvalidInput("mimo: channel dimensions inconsistent");
    }
  }
}

MimoBcInstance MimoBcInstance::random(int users, int tx, int rx,
                                      double power_db, std::uint64_t seed) {
  Rng rng(seed);
  MimoBcInstance inst;
  inst.users = users;
  inst.tx = tx;
  inst.rx = rx;
  inst.power = std::pow(10.0, power_db / 10.0);
  inst.H.resize(static_cast<std::size_t>(users));
  for (auto& h : inst.H) {
    h.resize(rx, tx);
    for (Eigen::Index i = 0; i < rx; ++i) {
      for (Eigen::Index j = 0; j < tx; ++j) h(i, j) = rng.cgauss();
    }
  }
  inst.validate();
  return inst;
}

CovariancePoint zero_point(const MimoBcInstance& inst) {
  return CovariancePoint(static_cast<std::size_t>(inst.users),
                         CMatrix::Zero(inst.tx, inst.tx));
}

void validate_covariance(const CovariancePoint& q, const MimoBcInstance& inst) {
  if (static_cast<int>(q.size()) != inst.users) {
    throw InvalidInput("covariance: user count mismatch");
  }
  for (const auto& qk : q) {
    if (qk.rows() != inst.tx || qk.cols() != inst.tx || !is_hermitian(qk, 1e-9)) {
      throw InvalidInput("covariance: not Hermitian");
    }
    const EigResult eig = hermitian_eig(hermitianize(qk));
    const double scale = 1.0 + std::abs(eig.values(0));
    if (eig.values(eig.values.size() - 1) < -1e-9 * scale) {
      throw InvalidInput("covariance: not positive semidefinite");
    }
  }
  if (total_power(q) > inst.power * (1.0 + 1e-9)) {
    throw InvalidInput("covariance: power budget exceeded");
  }
}

void psd_repair(CovariancePoint& q) {
  for (auto& qk : q) {
    const CMatrix sym = hermitianize(qk);
    const EigResult eig = hermitian_eig(sym);
    const double scale = 1.0 + std::abs(eig.values(0));
    Eigen::VectorXd vals = eig.values;
    bool dirty = false;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (vals(i) < -1e-9 * scale) {
        throw NumericalBreakdown("covariance lost positive semidefiniteness");
      }
      if (vals(i) < 0.0) {
        vals(i) = 0.0;
        dirty = true;
      }
    }
    if (dirty) {
      qk = eig.vectors * vals.asDiagonal() * eig.vectors.adjoint();
    } else {
      qk = sym;
    }
  }
}

double bc_objective(const CovariancePoint& q, const MimoBcInstance& inst) {
  return logdet_hpd(interference_matrix(q, inst));
}

std::vector<CMatrix> bc_gradient(const CovariancePoint& q,
                                 const MimoBcInstance& inst) {
  const CMatrix m = interference_matrix(q, inst);
  const Eigen::LLT<CMatrix> llt(m);
  std::vector<CMatrix> grad(static_cast<std::size_t>(inst.users));
  for (int k = 0; k < inst.users; ++k) {
    const CMatrix& h = inst.H[static_cast<std::size_t>(k)];
    grad[static_cast<std::size_t>(k)] = hermitianize(h.adjoint() * llt.solve(h));
  }
  return grad;
}

CMatrix waterfill_user(const CMatrix& h, const CMatrix& r, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("waterfilling: lambda must be positive");
  return allocate(user_spectrum(h, r), lambda);
}

CovariancePoint bc_best_response(const CovariancePoint& q,
                                 const MimoBcInstance& inst, double* lambda_out,
                                 int workers) {
  const CMatrix m = interference_matrix(q, inst);
  std::vector<UserSpectrum> spectra(static_cast<std::size_t>(inst.users));
  parallel_for(inst.users, workers, [&](Eigen::Index k) {
    const auto uk = static_cast<std::size_t>(k);
    const CMatrix r =
        hermitianize(m - inst.H[uk] * q[uk] * inst.H[uk].adjoint());
    spectra[uk] = user_spectrum(inst.H[uk], r);
  });

  const auto power_at = [&](double lambda) {
    double acc = 0.0;
    for (const auto& sp : spectra) {
      for (Eigen::Index i = 0; i < sp.sigma.size(); ++i) {
        const double s = sp.sigma(i);
        if (s > 1e-14) acc += std::max(1.0 / lambda - 1.0 / s, 0.0);
      }
    }
    return acc;
  };

  double lambda = 0.0;
  const double lo_probe = 1e-12;
  if (power_at(lo_probe) <= inst.power) {
    // Unconstrained surrogate optimum already fits the budget.
    lambda = lo_probe;
  } else {
    double lo = lo_probe;
    double hi = 1.0;
    int doublings = 0;
    while (power_at(hi) > inst.power) {
      hi *= 2.0;
      if (++doublings > 60) {
        throw NoBracket("power function failed to bracket the budget");
      }
    }
    const double tol = 1e-9 * std::max(1.0, inst.power);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double excess = power_at(mid) - inst.power;
      if (std::abs(excess) <= tol) {
        lo = hi = mid;
        break;
      }
      if (excess > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lambda = 0.5 * (lo + hi);
  }
  if (lambda_out) *lambda_out = lambda;

  CovariancePoint bq(static_cast<std::size_t>(inst.users));
  for (int k = 0; k < inst.users; ++k) {
    bq[static_cast<std::size_t>(k)] =
        allocate(spectra[static_cast<std::size_t>(k)], lambda);
  }
  return bq;
}

double bc_error(const CovariancePoint& q, const CovariancePoint& bq,
                const MimoBcInstance& inst) {
  const auto grad = bc_gradient(q, inst);
  double acc = 0.0;
  for (int k = 0; k < inst.users; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    acc += (grad[uk] * (bq[uk] - q[uk])).trace().real();
  }
  return acc;
}

namespace {

// Projection onto {Q_k >= 0, sum tr(Q_k) <= P}: eigenvalues of the blocks are
// jointly projected onto the nonnegative simplex, eigenvectors kept.
CovariancePoint project_covariance(const CovariancePoint& q, double power) {
  std::vector<EigResult> eigs;
  eigs.reserve(q.size());
  Eigen::Index total = 0;
  for (const auto& qk : q) {
    eigs.push_back(hermitian_eig(hermitianize(qk)));
    total += qk.rows();
  }
  Vector all(total);
  Eigen::Index at = 0;
  for (const auto& e : eigs) {
    all.segment(at, e.values.size()) = e.values;
    at += e.values.size();
  }
  Vector clipped = all.cwiseMax(0.0);
  if (clipped.sum() > power) {
    const auto excess = [&](double theta) {
      return power - (all.array() - theta).cwiseMax(0.0).sum();
    };
    const double theta = bisect_root(excess, Interval(0.0, all.maxCoeff()),
                                     {1e-12 * (1.0 + power), 200});
    clipped = (all.array() - theta).cwiseMax(0.0).matrix();
  }
  CovariancePoint out(q.size());
  at = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const auto& e = eigs[k];
    out[k] = e.vectors * clipped.segment(at, e.values.size()).asDiagonal() *
             e.vectors.adjoint();
    at += e.values.size();
  }
  return out;
}

// Inner projected-gradient solve of the tau-regularized surrogate; the
// regulariser breaks the waterfilling closed form, so this comparison
// configuration pays for its subproblem iteratively.
CovariancePoint regularized_best_response(const CovariancePoint& q,
                                          const MimoBcInstance& inst,
                                          double tau) {
  CovariancePoint z = q;
  double step = 0.5;
  const auto surrogate = [&](const CovariancePoint& p) {
    double acc = 0.0;
    for (int k = 0; k < inst.users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      CMatrix rk = CMatrix::Identity(inst.rx, inst.rx);
      for (int j = 0; j < inst.users; ++j) {
        if (j == k) continue;
        const auto uj = static_cast<std::size_t>(j);
        rk += inst.H[uj] * q[uj] * inst.H[uj].adjoint();
      }
      acc += logdet_hpd(hermitianize(rk + inst.H[uk] * p[uk] * inst.H[uk].adjoint()));
      acc -= 0.5 * tau * (p[uk] - q[uk]).squaredNorm();
    }
    return acc;
  };

  double current = surrogate(z);
  for (int it = 0; it < 300; ++it) {
    CovariancePoint trial(z.size());
    for (int k = 0; k < inst.users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      CMatrix rk = CMatrix::Identity(inst.rx, inst.rx);
      for (int j = 0; j < inst.users; ++j) {
        if (j == k) continue;
        const auto uj = static_cast<std::size_t>(j);
        rk += inst.H[uj] * q[uj] * inst.H[uj].adjoint();
      }
      const CMatrix mk =
          hermitianize(rk + inst.H[uk] * z[uk] * inst.H[uk].adjoint());
      const Eigen::LLT<CMatrix> llt(mk);
      const CMatrix gk =
          hermitianize(inst.H[uk].adjoint() * llt.solve(inst.H[uk])) -
          tau * (z[uk] - q[uk]);
      trial[uk] = z[uk] + step * gk;
    }
    trial = project_covariance(trial, inst.power);
    const double value = surrogate(trial);
    if (value < current - 1e-14) {
      step *= 0.5;
      if (step < 1e-8) break;
      continue;
    }
    double moved = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      moved = std::max(moved, (trial[k] - z[k]).cwiseAbs().maxCoeff());
    }
    z = trial;
    current = value;
    if (moved <= 1e-9) break;
  }
  return z;
}

}  // namespace

BcResult bc_solve(const MimoBcInstance& inst, const BcOptions& opt) {
  inst.validate();
  const auto t0 = std::chrono::steady_clock::now();
  BcResult res;
  res.Q = zero_point(inst);
  IterateTrace& trace = res.trace;

  double gamma_state = opt.gamma0;
  for (int t = 0; t <= opt.max_iter; ++t) {
    const double rate = bc_objective(res.Q, inst);
    CovariancePoint bq =
        opt.step == BcStep::RegularizedDecreasing
            ? regularized_best_response(res.Q, inst, opt.tau)
            : bc_best_response(res.Q, inst, nullptr, opt.workers);
    const double err = bc_error(res.Q, bq, inst);

    const bool done = err <= opt.tol || t == opt.max_iter;
    double gamma = 0.0;
    if (!done) {
      switch (opt.step) {
        case BcStep::ExactBisection: {
          // The restriction gamma -> log det((1-gamma) M + gamma MB) is
          // concave; bisect its derivative.
          const CMatrix m = interference_matrix(res.Q, inst);
          const CMatrix mb = interference_matrix(bq, inst);
          const CMatrix diff = mb - m;
          const auto dphi = [&](double g) {
            const CMatrix mg = hermitianize(m + g * diff);
            const Eigen::LLT<CMatrix> llt(mg);
            return llt.solve(diff).trace().real();
          };
          if (dphi(1.0) >= 0.0) {
            gamma = 1.0;
          } else {
            const auto neg = [&](double g) { return -dphi(g); };
            gamma = bisect_root(neg, Interval(0.0, 1.0), {1e-8, 64});
          }
          break;
        }
        case BcStep::FixedInverseK:
          gamma = 1.0 / static_cast<double>(inst.users);
          break;
        case BcStep::RegularizedDecreasing:
          gamma = gamma_state;
          gamma_state = gamma_state * (1.0 - opt.decrease_rate * gamma_state);
          break;
      }
    }

    // Minimization convention for the trace; the sum rate itself is kept in
    // the side column.
    trace.records.push_back({t, -rate, gamma, err, seconds_since(t0)});
    res.sum_rates.push_back(rate);
    if (done) {
      trace.reason = err <= opt.tol ? StopReason::Converged
                                    : StopReason::MaxIterations;
      res.sum_rate = rate;
      break;
    }

    for (int k = 0; k < inst.users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      res.Q[uk] += gamma * (bq[uk] - res.Q[uk]);
    }
    psd_repair(res.Q);
  }
  return res;
}

}  // namespace sca::mimo
