#include "sca/lasso.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include "sca/numerics.hpp"
#include "sca/parallel.hpp"
#include "sca/rng.hpp"

namespace sca::lasso {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double objective(const LassoInstance& inst, const Vector& x, const Vector& s) {
  return 0.5 * s.squaredNorm() + inst.mu * x.lpNorm<1>();
}

// e(x) from the gradient already at hand; grad = A'(Ax - b).
double error_from_grad(const Vector& grad, const Vector& x, double mu) {
  const Vector inner = grad - x;
  const Vector clipped = inner.cwiseMin(mu).cwiseMax(-mu);
  return (grad - clipped).norm();
}

double stepsize_from_direction(const Vector& s, const Vector& ad,
                               double l1_change, double mu) {
  const double den = ad.squaredNorm();
  const double num = s.dot(ad) + mu * l1_change;
  if (den <= 0.0) return num < 0.0 ? 1.0 : 0.0;  // null-space direction
  return project_box(-num / den, 0.0, 1.0);
}

}  // namespace

void LassoInstance::validate() const {
  if (A.rows() != b.size()) throw InvalidInput("lasso: A rows != b length");
  if (A.cols() == 0 || A.rows() == 0) throw InvalidInput("lasso: empty matrix");
  if (!(mu > 0.0)) throw InvalidInput("lasso: mu must be positive");
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    if (A.col(k).squaredNorm() <= 0.0) {
      throw DegenerateColumn("degenerate column");
    }
  }
}

LassoInstance LassoInstance::random(Eigen::Index n, Eigen::Index k,
                                    double density, double noise_var,
                                    double mu_factor, std::uint64_t seed) {
  Rng rng(seed);
  LassoInstance inst;
  inst.A.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) inst.A(i, j) = rng.gauss();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double nrm = inst.A.row(i).norm();
    if (nrm > 0.0) inst.A.row(i) /= nrm;
  }

  // Sparse ground truth with an exact nonzero count of round(density * k).
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  const auto nnz = static_cast<Eigen::Index>(std::llround(density * static_cast<double>(k)));
  for (Eigen::Index i = 0; i < k - 1; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           rng.integer(static_cast<std::uint64_t>(k - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  Vector x_true = Vector::Zero(k);
  for (Eigen::Index i = 0; i < nnz; ++i) {
    x_true(idx[static_cast<std::size_t>(i)]) = rng.gauss();
  }

  const double noise_std = std::sqrt(noise_var);
  inst.b = inst.A * x_true;
  for (Eigen::Index i = 0; i < n; ++i) inst.b(i) += noise_std * rng.gauss();

  inst.mu = mu_factor * (inst.A.transpose() * inst.b).cwiseAbs().maxCoeff();
  inst.validate();
  return inst;
}

StelaState StelaState::init(const LassoInstance& inst, std::optional<Vector> x0) {
  inst.validate();
  StelaState st;
  st.col_norms2 = inst.A.colwise().squaredNorm();
  if (x0) {
    if (x0->size() != inst.A.cols()) throw InvalidInput("x0: wrong dimension");
    st.x = std::move(*x0);
    st.s = inst.A * st.x - inst.b;
  } else {
    st.x = Vector::Zero(inst.A.cols());
    st.s = -inst.b;
  }
  return st;
}

Vector stela_best_response(const StelaState& st, const LassoInstance& inst,
                           int workers) {
  if ((st.col_norms2.array() <= 0.0).any()) {
    throw DegenerateColumn("degenerate column");
  }
  const Vector ats = inst.A.transpose() * st.s;
  const Vector r = st.col_norms2.cwiseProduct(st.x) - ats;
  Vector bx(st.x.size());
  parallel_for(st.x.size(), workers, [&](Eigen::Index k) {
    bx(k) = soft_threshold(r(k), inst.mu) / st.col_norms2(k);
  });
  return bx;
}

double stela_stepsize(const StelaState& st, const Vector& bx,
                      const LassoInstance& inst) {
  const Vector ad = inst.A * (bx - st.x);
  return stepsize_from_direction(st.s, ad, bx.lpNorm<1>() - st.x.lpNorm<1>(),
                                 inst.mu);
}

double lasso_error(const Vector& x, const LassoInstance& inst) {
  const Vector grad = inst.A.transpose() * (inst.A * x - inst.b);
  return error_from_grad(grad, x, inst.mu);
}

namespace {

// Shared loop for STELA and the decreasing-stepsize baseline; gamma_of
// returns the stepsize given (state, bx, ad, error at x).
template <typename GammaFn>
SolveResult iterate(const LassoInstance& inst, const StelaOptions& opt,
                    std::optional<Vector> x0, GammaFn gamma_of) {
  const auto t0 = std::chrono::steady_clock::now();
  StelaState st = StelaState::init(inst, std::move(x0));

  SolveResult out;
  IterateTrace& trace = out.trace;

  for (int t = 0; t <= opt.max_iter; ++t) {
    if (opt.resync_every > 0 && t > 0 && t % opt.resync_every == 0) {
      st.s = inst.A * st.x - inst.b;
    }
    const Vector ats = inst.A.transpose() * st.s;
    const double err = error_from_grad(ats, st.x, inst.mu);
    const double obj = objective(inst, st.x, st.s);
    if (std::isnan(obj)) throw NumericalBreakdown("numerical breakdown");

    if (err <= opt.err_tol) {
      trace.records.push_back({t, obj, 0.0, err, seconds_since(t0)});
      trace.reason = StopReason::Converged;
      break;
    }
    if (t == opt.max_iter) {
      trace.records.push_back({t, obj, 0.0, err, seconds_since(t0)});
      trace.reason = StopReason::MaxIterations;
      break;
    }

    const Vector r = st.col_norms2.cwiseProduct(st.x) - ats;
    Vector bx(st.x.size());
    parallel_for(st.x.size(), opt.workers, [&](Eigen::Index k) {
      bx(k) = soft_threshold(r(k), inst.mu) / st.col_norms2(k);
    });

    const Vector ad = inst.A * (bx - st.x);
    const double gamma = gamma_of(st, bx, ad, err);
    if (gamma == 0.0) {
      // The exact stepsize only vanishes at a fixed point; numerically it
      // means the update direction no longer offers measurable descent.
      trace.records.push_back({t, obj, gamma, err, seconds_since(t0)});
      trace.reason = StopReason::NonDescentDirection;
      trace.notices.push_back(
          "exact stepsize vanished below the floating-point floor");
      break;
    }

    trace.records.push_back({t, obj, gamma, err, seconds_since(t0)});
    st.x += gamma * (bx - st.x);
    st.s += gamma * ad;  // residual recursion: one vector addition
    if (st.x.cwiseAbs().maxCoeff() > 1e12) {
      trace.reason = StopReason::Diverged;
      trace.notices.push_back("iterate magnitude guard tripped");
      break;
    }
  }

  out.x = std::move(st.x);
  return out;
}

}  // namespace

SolveResult stela_solve(const LassoInstance& inst, const StelaOptions& opt,
                        std::optional<Vector> x0) {
  return iterate(inst, opt, std::move(x0),
                 [&inst](const StelaState& st, const Vector& bx,
                         const Vector& ad, double) {
                   return stepsize_from_direction(
                       st.s, ad, bx.lpNorm<1>() - st.x.lpNorm<1>(), inst.mu);
                 });
}

SolveResult flexa_baseline(const LassoInstance& inst, double decrease_rate,
                           double gamma0, const StelaOptions& opt) {
  if (decrease_rate < 0.0) throw InvalidInput("decrease rate must be >= 0");
  double gamma = gamma0;
  return iterate(inst, opt, std::nullopt,
                 [decrease_rate, gamma](const StelaState&, const Vector&,
                                        const Vector&, double err) mutable {
                   const double used = gamma;
                   const double damp =
                       std::min(1.0, 1e-4 / std::max(err, 1e-300));
                   gamma = gamma * (1.0 - damp * decrease_rate * gamma);
                   return used;
                 });
}

BpResult basis_pursuit_solve(const Matrix& A, const Vector& b,
                             const BpOptions& opt) {
  if (A.rows() != b.size()) throw InvalidInput("basis pursuit: A rows != b length");
  BpResult res;
  res.lambda = Vector::Zero(A.rows());
  res.x = Vector::Zero(A.cols());

  const double atb_inf = (A.transpose() * b).cwiseAbs().maxCoeff();
  if (atb_inf == 0.0) {
    // b orthogonal to the range: x = 0 is the best l1 point.
    res.feasibility = b.norm();
    res.converged = res.feasibility <= 1e-12;
    return res;
  }

  double c = 10.0 / atb_inf;
  StelaOptions inner;
  inner.err_tol = opt.inner_err_tol;
  inner.max_iter = opt.inner_max_iter;
  inner.workers = opt.workers;

  for (int t = 0; t < opt.outer_cap; ++t) {
    // min ||x||_1 + lambda'(Ax - b) + c/2 ||Ax - b||^2 rewritten as a LASSO
    // instance in the shifted target: 0.5 ||sqrt(c) A x - sqrt(c) u||^2 + ||x||_1
    // with u = b - lambda / c.
    LassoInstance sub;
    const double root_c = std::sqrt(c);
    sub.A = root_c * A;
    sub.b = root_c * (b - res.lambda / c);
    sub.mu = 1.0;
    res.x = stela_solve(sub, inner, res.x).x;

    const Vector violation = A * res.x - b;
    const Vector lambda_next = res.lambda + c * violation;
    const double change = (lambda_next - res.lambda).cwiseAbs().maxCoeff();
    res.lambda = lambda_next;
    res.outer_iterations = t + 1;
    res.feasibility = violation.norm();
    if (change <= opt.lambda_tol * (1.0 + res.lambda.cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }
    c = std::min(2.0 * c, 1e2);
  }
  return res;
}

}  // namespace sca::lasso
