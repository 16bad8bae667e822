#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sca/lasso.hpp"
#include "sca/rng.hpp"
#include "support/oracles.hpp"

using namespace sca;
using namespace sca::lasso;

namespace {

LassoInstance random_instance(Rng& rng, Eigen::Index n, Eigen::Index k,
                              double mu) {
  LassoInstance inst;
  inst.A.resize(n, k);
  inst.b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inst.b(i) = rng.gauss();
    for (Eigen::Index j = 0; j < k; ++j) inst.A(i, j) = rng.gauss();
  }
  inst.mu = mu;
  return inst;
}

double objective(const LassoInstance& inst, const Vector& x) {
  return 0.5 * (inst.A * x - inst.b).squaredNorm() + inst.mu * x.lpNorm<1>();
}

}  // namespace

TEST_CASE("instance validation") {
  LassoInstance inst;
  inst.A = Matrix::Identity(2, 2);
  inst.b = Vector::Ones(2);
  inst.mu = 0.0;
  CHECK_THROWS_AS(inst.validate(), InvalidInput);
  inst.mu = 0.5;
  CHECK_NOTHROW(inst.validate());
  inst.A.col(1).setZero();
  CHECK_THROWS_AS(inst.validate(), DegenerateColumn);
}

TEST_CASE("best response with identity matrix is plain shrinkage") {
  LassoInstance inst;
  inst.A = Matrix::Identity(4, 4);
  inst.b.resize(4);
  inst.b << 2.0, -0.5, 0.1, -3.0;
  inst.mu = 1.0;
  const auto st = StelaState::init(inst);
  const Vector bx = stela_best_response(st, inst);
  const Vector expect = soft_threshold(inst.b, Vector::Ones(4));
  CHECK((bx - expect).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("best response solves each scalar subproblem exactly") {
  Rng rng(61);
  const auto inst = random_instance(rng, 5, 8, 0.4);
  auto st = StelaState::init(inst);
  // Nudge to a random interior point.
  Vector x0(8);
  for (int i = 0; i < 8; ++i) x0(i) = rng.uniform(-1.0, 1.0);
  st = StelaState::init(inst, x0);
  const Vector bx = stela_best_response(st, inst);
  for (Eigen::Index k = 0; k < 8; ++k) {
    // Scalar oracle: dense grid on f(x_k | x_-k) + mu |x_k| around Bx_k.
    const auto scalar = [&](double v) {
      Vector x = st.x;
      x(k) = v;
      return objective(inst, x);
    };
    const double oracle =
        oracles::grid_min_1d(scalar, bx(k) - 1.0, bx(k) + 1.0, 20001);
    CHECK(scalar(bx(k)) <= scalar(oracle) + 1e-10);
  }
}

TEST_CASE("fixed-point characterization at enumeration-exact solutions") {
  Rng rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const auto inst = random_instance(rng, 6, 4, rng.uniform(0.2, 0.8));
    const auto exact = oracles::lasso_enumeration(inst.A, inst.b, inst.mu);
    REQUIRE(std::isfinite(exact.objective));
    // e(x*) = 0 and the best response fixes x*, both within 1e-9.
    CHECK(lasso_error(exact.x, inst) <= 1e-9);
    const auto st = StelaState::init(inst, exact.x);
    const Vector bx = stela_best_response(st, inst);
    CHECK((bx - exact.x).cwiseAbs().maxCoeff() <= 1e-9);
    // Conversely, a clearly non-optimal point has e > 1e-9 and moves.
    Vector off = exact.x;
    off(0) += 0.25;
    CHECK(lasso_error(off, inst) > 1e-6);
    const auto st2 = StelaState::init(inst, off);
    CHECK((stela_best_response(st2, inst) - off).cwiseAbs().maxCoeff() > 1e-6);
  }
}

TEST_CASE("stepsize: quadratic-only with identity matrix takes a full step") {
  LassoInstance inst;
  inst.A = Matrix::Identity(3, 3);
  inst.b.resize(3);
  inst.b << 1.0, 2.0, -1.0;
  inst.mu = 1e-12;  // vanishing l1 part: pure separable quadratic
  const auto st = StelaState::init(inst);
  const Vector bx = stela_best_response(st, inst);
  CHECK(stela_stepsize(st, bx, inst) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stepsize minimizes the surrogate over a dense gamma grid") {
  Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = random_instance(rng, 6, 10, 0.3);
    Vector x0(10);
    for (int i = 0; i < 10; ++i) x0(i) = rng.uniform(-0.5, 0.5);
    const auto st = StelaState::init(inst, x0);
    const Vector bx = stela_best_response(st, inst);
    const double gamma = stela_stepsize(st, bx, inst);

    const double delta_l1 = bx.lpNorm<1>() - st.x.lpNorm<1>();
    const auto surrogate = [&](double g) {
      return 0.5 * (inst.A * (st.x + g * (bx - st.x)) - inst.b).squaredNorm() +
             g * inst.mu * delta_l1;
    };
    const double at_gamma = surrogate(gamma);
    for (int i = 0; i <= 10000; ++i) {
      const double g = static_cast<double>(i) / 10000.0;
      CHECK(at_gamma <= surrogate(g) + 1e-12);
    }
  }
}

TEST_CASE("null-space direction handling") {
  // A = [1, -1]: directions along (1, 1) are invisible to the residual.
  LassoInstance inst;
  inst.A.resize(1, 2);
  inst.A << 1.0, -1.0;
  inst.b = Vector::Zero(1);
  inst.mu = 0.5;

  StelaState st;
  st.col_norms2 = inst.A.colwise().squaredNorm();

  SUBCASE("l1 increase along the null space is refused") {
    st.x = Vector::Zero(2);
    st.s = inst.A * st.x - inst.b;
    const Vector bx = Vector::Ones(2);
    CHECK(stela_stepsize(st, bx, inst) == 0.0);
  }
  SUBCASE("l1 decrease along the null space takes the full step") {
    st.x = Vector::Ones(2);
    st.s = inst.A * st.x - inst.b;
    const Vector bx = Vector::Zero(2);
    CHECK(stela_stepsize(st, bx, inst) == 1.0);
  }
}

TEST_CASE("lasso_error is zero exactly at solutions") {
  SUBCASE("hand-solved scalar instance a=2, b=3, mu=1") {
    LassoInstance inst;
    inst.A = Matrix::Constant(1, 1, 2.0);
    inst.b = Vector::Constant(1, 3.0);
    inst.mu = 1.0;
    // KKT: 2 (2x - 3) + sign(x) = 0 -> x = 5/4.
    CHECK(lasso_error(Vector::Constant(1, 1.25), inst) <= 1e-10);
    CHECK(lasso_error(Vector::Constant(1, 0.7), inst) > 1e-3);
  }
  SUBCASE("large mu makes zero optimal") {
    Rng rng(73);
    const auto inst = [&] {
      auto i = random_instance(rng, 4, 6, 0.0);
      i.mu = 2.0 * (i.A.transpose() * i.b).cwiseAbs().maxCoeff();
      return i;
    }();
    CHECK(lasso_error(Vector::Zero(6), inst) == 0.0);
  }
  SUBCASE("random point gives positive error") {
    Rng rng(79);
    const auto inst = random_instance(rng, 4, 6, 0.3);
    Vector x(6);
    for (int i = 0; i < 6; ++i) x(i) = rng.uniform(-1.0, 1.0);
    CHECK(lasso_error(x, inst) > 0.0);
  }
}

TEST_CASE("one-dimensional instance solves in one iteration") {
  LassoInstance inst;
  inst.A = Matrix::Constant(1, 1, 2.0);
  inst.b = Vector::Constant(1, 3.0);
  inst.mu = 1.0;
  const auto res = stela_solve(inst);
  CHECK(res.trace.converged());
  CHECK(res.x(0) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(res.trace.iterations() <= 1);
}

TEST_CASE("zero right-hand side solves immediately") {
  LassoInstance inst;
  inst.A = Matrix::Identity(3, 3);
  inst.b = Vector::Zero(3);
  inst.mu = 0.5;
  const auto res = stela_solve(inst);
  CHECK(res.trace.converged());
  CHECK(res.trace.iterations() == 0);
  CHECK(res.x.norm() == 0.0);
}

TEST_CASE("objective decreases strictly until convergence") {
  Rng rng(83);
  const auto inst = random_instance(rng, 20, 40, 0.2);
  const auto res = stela_solve(inst);
  REQUIRE(res.trace.converged());
  for (std::size_t i = 1; i < res.trace.records.size(); ++i) {
    CHECK(res.trace.records[i].objective <
          res.trace.records[i - 1].objective + 1e-14);
  }
}

TEST_CASE("residual recursion stays synchronized") {
  Rng rng(89);
  const auto inst =
      LassoInstance::random(40, 80, 0.1, 1e-4, 0.05, rng.integer(1u << 30));
  StelaOptions opt;
  opt.err_tol = 0.0;  // force the full run
  opt.max_iter = 1200;
  const auto res = stela_solve(inst, opt);
  // Recompute the residual from scratch at the final iterate.
  const Vector s_true = inst.A * res.x - inst.b;
  // stela_solve keeps s internally; verify via objective consistency.
  const double traced = res.trace.records.back().objective;
  const double recomputed = objective(inst, res.x);
  CHECK(std::abs(traced - recomputed) <= 1e-9 * (1.0 + inst.b.norm()));
  CHECK(s_true.allFinite());
}

TEST_CASE("small random instances match exhaustive sign-pattern enumeration") {
  Rng rng(97);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index k = 3 + static_cast<Eigen::Index>(rng.integer(4));
    const auto inst = random_instance(rng, 4, k, rng.uniform(0.05, 0.6));
    const auto res = stela_solve(inst, {1e-8, 20000, 500, 1});
    const double expect =
        oracles::lasso_enumeration_objective(inst.A, inst.b, inst.mu);
    const double got = objective(inst, res.x);
    CHECK(got == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("flexa baseline converges but slower than stela") {
  const auto inst = LassoInstance::random(60, 120, 0.1, 1e-4, 0.1, 1234);
  StelaOptions opt;
  opt.err_tol = 1e-6;
  opt.max_iter = 4000;
  const auto fast = stela_solve(inst, opt);
  const auto slow = flexa_baseline(inst, 1e-2, 0.5, opt);
  REQUIRE(fast.trace.converged());
  REQUIRE(slow.trace.converged());
  CHECK(slow.trace.iterations() > fast.trace.iterations());
}

TEST_CASE("flexa at the paper start gamma diverges on this family and is reported") {
  // gamma0 = 0.9 exceeds the stable range of the unregularized parallel
  // update on 1:2 normalized-row instances; the magnitude guard reports it.
  const auto inst = LassoInstance::random(60, 120, 0.1, 1e-4, 0.1, 1234);
  StelaOptions opt;
  opt.err_tol = 1e-6;
  opt.max_iter = 4000;
  const auto res = flexa_baseline(inst, 1e-2, 0.9, opt);
  CHECK(res.trace.reason == StopReason::Diverged);
}

TEST_CASE("flexa with zero decrease rate keeps gamma constant") {
  const auto inst = LassoInstance::random(20, 30, 0.1, 1e-4, 0.1, 77);
  StelaOptions opt;
  opt.err_tol = 1e-6;
  opt.max_iter = 3000;
  const auto res = flexa_baseline(inst, 0.0, 0.5, opt);
  for (const auto& rec : res.trace.records) {
    if (rec.gamma != 0.0) CHECK(rec.gamma == 0.5);
  }
}

TEST_CASE("flexa gamma sequence follows the damped decreasing rule") {
  const auto inst = LassoInstance::random(30, 60, 0.1, 1e-4, 0.1, 91);
  StelaOptions opt;
  opt.err_tol = 1e-8;
  opt.max_iter = 4000;
  const double d = 0.05;
  const auto res = flexa_baseline(inst, d, 0.5, opt);
  REQUIRE(res.trace.records.size() >= 3);
  double gamma = 0.5;
  for (const auto& rec : res.trace.records) {
    if (rec.gamma == 0.0) break;
    CHECK(rec.gamma == doctest::Approx(gamma).epsilon(1e-14));
    const double damp = std::min(1.0, 1e-4 / rec.error);
    gamma = gamma * (1.0 - damp * d * gamma);
  }
}

TEST_CASE("basis pursuit with identity matrix returns b") {
  Vector b(3);
  b << 1.0, -2.0, 0.5;
  const auto res = basis_pursuit_solve(Matrix::Identity(3, 3), b);
  CHECK(res.converged);
  CHECK((res.x - b).cwiseAbs().maxCoeff() <= 1e-8);
  // Multiplier consistent with the negative sign subgradient.
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(res.lambda(i)) <= 1.0 + 1e-6);
    if (std::abs(b(i)) > 1e-9) {
      CHECK(res.lambda(i) == doctest::Approx(-1.0 * (b(i) > 0 ? 1.0 : -1.0))
                                 .epsilon(1e-3));
    }
  }
}

TEST_CASE("basis pursuit on zero right-hand side returns zero") {
  const auto res = basis_pursuit_solve(Matrix::Identity(2, 2), Vector::Zero(2));
  CHECK(res.converged);
  CHECK(res.x.norm() == 0.0);
}

TEST_CASE("underdetermined 2x4 instances reach the enumeration-verified minimum l1") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix A(2, 4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 4; ++j) A(i, j) = rng.gauss();
    }
    Vector x_seed = Vector::Zero(4);
    x_seed(static_cast<Eigen::Index>(rng.integer(4))) = rng.uniform(0.5, 2.0);
    const Vector b = A * x_seed;
    const Vector best = oracles::min_l1_by_enumeration(A, b);
    REQUIRE(best.size() == 4);

    const auto res = basis_pursuit_solve(A, b);
    CHECK(res.converged);
    CHECK((A * res.x - b).norm() <= 1e-6);
    CHECK(res.x.lpNorm<1>() <= best.lpNorm<1>() + 1e-6);
  }
}

TEST_CASE("basis pursuit reports infeasibility instead of throwing") {
  // b outside the range of A (A has rank 1).
  Matrix A(2, 2);
  A << 1.0, 1.0, 1.0, 1.0;
  Vector b(2);
  b << 1.0, -1.0;
  const auto res = basis_pursuit_solve(A, b);
  CHECK_FALSE(res.converged);
  CHECK(res.feasibility > 0.1);
}

TEST_CASE("generated instances are deterministic and correctly shaped") {
  const auto a = LassoInstance::random(30, 50, 0.1, 1e-4, 0.1, 42);
  const auto b = LassoInstance::random(30, 50, 0.1, 1e-4, 0.1, 42);
  CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.b - b.b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.mu == b.mu);
  // Rows normalized to unity.
  for (int i = 0; i < 30; ++i) {
    CHECK(a.A.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(a.mu == doctest::Approx(0.1 * (a.A.transpose() * a.b).cwiseAbs().maxCoeff()));
}
