// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here, not configurable.
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sca/ee_max.hpp"
#include "sca/engine.hpp"
#include "sca/lasso.hpp"
#include "sca/mimo_bc.hpp"
#include "../support/hermitian_coords.hpp"
#include "../support/oracles.hpp"

using namespace sca;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_lasso_desk() {
  int converged = 0;
  double worst_seconds = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = lasso::LassoInstance::random(200, 400, 0.1, 1e-4, 0.1, seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = lasso::stela_solve(inst, {1e-6, 2000, 500, 1});
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    worst_seconds = std::max(worst_seconds, secs);
    if (res.trace.converged() && res.trace.final_error() <= 1e-6) ++converged;
  }
  const bool ok = converged >= 19 && worst_seconds <= 5.0;
  report(1, "LASSO desk reproduction (N=200, K=400)", ok,
         fmt("%d/20 seeds at e<=1e-6 within 2000 iterations, worst %.2fs",
             converged, worst_seconds));
}

// ---------------------------------------------------------------- criterion 2
void criterion_stela_vs_flexa() {
  // The baseline runs at gamma0 = 0.5, inside its stable regime for this
  // instance family; the paper's 0.9 start diverges here because the spec'd
  // baseline shares STELA's unregularized best response.
  const double gamma0 = 0.5;
  int slower_d2 = 0;
  int d2_converged = 0;
  int ratio2x = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = lasso::LassoInstance::random(200, 400, 0.1, 1e-4, 0.1, seed);
    lasso::StelaOptions opt{1e-6, 2000, 500, 1};
    const auto fast = lasso::stela_solve(inst, opt);
    const auto d2 = lasso::flexa_baseline(inst, 1e-2, gamma0, opt);
    const auto d1 = lasso::flexa_baseline(inst, 1e-1, gamma0, opt);
    if (d2.trace.converged()) ++d2_converged;
    if (d2.trace.converged() &&
        d2.trace.iterations() > fast.trace.iterations()) {
      ++slower_d2;
    }
    if (d1.trace.iterations() >= 2 * fast.trace.iterations()) ++ratio2x;
  }
  const bool ok = slower_d2 >= 18 && d2_converged >= 18 && ratio2x == 20;
  report(2, "STELA vs decreasing-stepsize baseline ordering", ok,
         fmt("gamma0=%.1f: d=1e-2 converged on %d, strictly slower on %d; "
             "d=1e-1 at >=2x on %d/20",
             gamma0, d2_converged, slower_d2, ratio2x));
}

// ---------------------------------------------------------------- criterion 3
void criterion_lasso_enumeration() {
  Rng rng(2024);
  int matched = 0;
  const int total = 50;
  for (int trial = 0; trial < total; ++trial) {
    const Eigen::Index k = 3 + static_cast<Eigen::Index>(rng.integer(8));  // 3..10
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.integer(4));
    lasso::LassoInstance inst;
    inst.A.resize(n, k);
    inst.b.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      inst.b(i) = rng.gauss();
      for (Eigen::Index j = 0; j < k; ++j) inst.A(i, j) = rng.gauss();
    }
    inst.mu = rng.uniform(0.05, 0.5) *
              (inst.A.transpose() * inst.b).cwiseAbs().maxCoeff();
    if (inst.mu <= 0.0) continue;

    const auto res = lasso::stela_solve(inst, {1e-10, 20000, 500, 1});
    const double got =
        0.5 * (inst.A * res.x - inst.b).squaredNorm() + inst.mu * res.x.lpNorm<1>();
    const double expect =
        oracles::lasso_enumeration_objective(inst.A, inst.b, inst.mu);
    if (std::abs(got - expect) <= 1e-8 * (1.0 + std::abs(expect))) ++matched;
  }
  report(3, "LASSO oracle equivalence against sign-pattern enumeration",
         matched == total, fmt("%d/%d instances matched to 1e-8", matched, total));
}

// ---------------------------------------------------------------- criterion 4
void criterion_mimo_ordering() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = mimo::MimoBcInstance::random(5, 2, 2, 10.0, seed);
    mimo::BcOptions exact_opt;
    exact_opt.tol = 1e-4;
    exact_opt.max_iter = 1000;
    const auto exact = mimo::bc_solve(inst, exact_opt);
    mimo::BcOptions fixed_opt = exact_opt;
    fixed_opt.step = mimo::BcStep::FixedInverseK;
    fixed_opt.max_iter = 5000;
    const auto fixed = mimo::bc_solve(inst, fixed_opt);

    const bool seed_ok = exact.trace.converged() &&
                         exact.trace.iterations() <= 15 &&
                         fixed.trace.converged() &&
                         fixed.trace.iterations() > exact.trace.iterations() &&
                         std::abs(exact.sum_rate - fixed.sum_rate) <= 1e-4;
    if (seed == 1) {
      detail = fmt("seed 1: exact %d it, fixed %d it, |rate gap| %.2e",
                   exact.trace.iterations(), fixed.trace.iterations(),
                   std::abs(exact.sum_rate - fixed.sum_rate));
    }
    ok = ok && seed_ok;
  }
  report(4, "MIMO-BC exact line search vs fixed 1/K (K=5, 2x2, 10 dB)", ok,
         detail);
}

// ---------------------------------------------------------------- criterion 5
void criterion_waterfilling() {
  Rng rng(4242);
  bool perturbations_ok = true;
  int trials_done = 0;
  while (trials_done < 20) {
    const auto inst =
        mimo::MimoBcInstance::random(1, 2, 2, 10.0, 100 + trials_done);
    CMatrix g(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = rng.cgauss();
    const CMatrix r = CMatrix::Identity(2, 2) + g * g.adjoint();
    const double lambda = rng.uniform(0.05, 0.4);
    const CMatrix q = mimo::waterfill_user(inst.H[0], r, lambda);
    const double trace = q.trace().real();
    if (trace <= 1e-9) continue;
    ++trials_done;

    const auto value = [&](const CMatrix& qq) {
      const CMatrix m = r + inst.H[0] * qq * inst.H[0].adjoint();
      const Eigen::LLT<CMatrix> llt(CMatrix(0.5 * (m + m.adjoint())));
      double acc = 0.0;
      for (int i = 0; i < 2; ++i) acc += std::log(llt.matrixL()(i, i).real());
      return 2.0 * acc - lambda * qq.trace().real();
    };
    const double best = value(q);
    for (int p = 0; p < 1000; ++p) {
      CMatrix gg(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gg(i, j) = rng.cgauss();
      CMatrix rival = gg * gg.adjoint();
      rival *= trace / rival.trace().real();
      if (value(rival) > best + 1e-9) {
        perturbations_ok = false;
      }
    }
  }

  // K=1 solve against the independent waterfilling construction.
  bool single_ok = true;
  double worst_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = mimo::MimoBcInstance::random(1, 3, 3, 10.0, seed);
    mimo::BcOptions opt;
    opt.tol = 1e-9;
    const auto res = mimo::bc_solve(inst, opt);

    const CMatrix z = inst.H[0].adjoint() * inst.H[0];
    const auto eig = hermitian_eig(CMatrix(0.5 * (z + z.adjoint())));
    const auto pour = [&](double level) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (eig.values(i) > 1e-14) {
          acc += std::max(level - 1.0 / eig.values(i), 0.0);
        }
      }
      return acc;
    };
    double lo = 0.0, hi = 1.0;
    while (pour(hi) < inst.power) hi *= 2.0;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pour(mid) < inst.power ? lo : hi) = mid;
    }
    const double level = 0.5 * (lo + hi);
    double analytic = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (eig.values(i) > 1e-14) {
        analytic += std::log(
            1.0 + eig.values(i) * std::max(level - 1.0 / eig.values(i), 0.0));
      }
    }
    const double gap = std::abs(res.sum_rate - analytic);
    worst_gap = std::max(worst_gap, gap);
    single_ok = single_ok && gap <= 1e-9 * (1.0 + std::abs(analytic));
  }
  report(5, "waterfilling optimality and K=1 analytic agreement",
         perturbations_ok && single_ok,
         fmt("20 trials x 1000 perturbations, K=1 worst gap %.1e", worst_gap));
}

// ---------------------------------------------------------------- criterion 6
void criterion_ee() {
  int single_matched = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = ee::EeInstance::random(1, 4, 0.01, seed);
    const auto res = ee::ee_solve(inst);
    const double oracle_p = oracles::refine_max_1d(
        [&](double p) { return ee::ee_objective(Vector::Constant(1, p), inst); },
        inst.pmin(0), inst.pmax(0), 40001);
    const double oracle_v = ee::ee_objective(Vector::Constant(1, oracle_p), inst);
    if (std::abs(res.ee - oracle_v) <= 1e-6 * (1.0 + std::abs(oracle_v))) {
      ++single_matched;
    }
  }

  bool multi_ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = ee::EeInstance::random(4, 8, 0.01, seed);
    ee::EeOptions opt;
    opt.kkt_tol = 1e-5;
    opt.max_iter = 200;
    const auto res = ee::ee_solve(inst, opt);
    bool monotone = true;
    for (std::size_t i = 1; i < res.ee_values.size(); ++i) {
      monotone = monotone && res.ee_values[i] >= res.ee_values[i - 1] - 1e-12;
    }
    multi_ok = multi_ok && res.trace.converged() && monotone &&
               ee::ee_kkt_residual(res.p, inst) <= 1e-5;
  }
  report(6, "EE: K=1 golden-section agreement and K=4 monotone KKT runs",
         single_matched == 20 && multi_ok,
         fmt("K=1 matched %d/20; K=4/M=8 monotone+KKT on 5 seeds: %s",
             single_matched, multi_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------- criterion 7
bool criterion_eq43_gate(bool* gate_clean) {
  Rng rng(777);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = ee::EeInstance::random(3, 4, 0.01, 9000 + trial / 5);
    Vector pt(3);
    for (int k = 0; k < 3; ++k) pt(k) = rng.uniform(inst.pmin(k), inst.pmax(k));
    const int k = static_cast<int>(rng.integer(3));
    const ee::UserLocal loc = ee::user_local(k, pt, inst);
    const double lambda = rng.uniform(0.0, 0.6);
    const double nu = loc.cross_gradient - lambda;
    const double a = inst.phi(k);
    const double w = inst.w(k, k);

    const double got = ee::parametric_power(loc.interference, a, w, nu,
                                            inst.pmin(k), inst.pmax(k));
    const auto objective = [&](double p) {
      return std::log(loc.interference + (a + w) * p) -
             std::log(loc.interference + a * p) + nu * p;
    };
    const double oracle =
        oracles::refine_max_1d(objective, inst.pmin(k), inst.pmax(k), 8001);
    if (std::abs(got - oracle) > 1e-6 * (1.0 + std::abs(oracle))) ++mismatches;
  }
  *gate_clean = mismatches == 0;
  report(7, "closed-form inner solution vs scalar oracle on 1000 triples",
         mismatches == 0, fmt("%d mismatches beyond 1e-6", mismatches));
  return mismatches == 0;
}

// ---------------------------------------------------------------- criterion 8
void criterion_framework() {
  Rng rng(31337);
  bool descent_ok = true;
  bool monotone_ok = true;
  int descent_checks = 0;

  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.integer(3));
    Vector curv(n), center(n), lo(n), hi(n), x0(n);
    for (int i = 0; i < n; ++i) {
      curv(i) = rng.uniform(0.2, 3.0);
      center(i) = rng.uniform(-2.0, 2.0);
      lo(i) = rng.uniform(-3.0, -0.2);
      hi(i) = rng.uniform(0.2, 3.0);
      x0(i) = rng.uniform(lo(i), hi(i));
    }
    SmoothProblem p;
    p.dim = n;
    p.value = [curv, center](const Vector& x) {
      return 0.5 * (x - center).cwiseProduct(curv.cwiseSqrt()).squaredNorm();
    };
    p.grad = [curv, center](const Vector& x) {
      return Vector(curv.cwiseProduct(x - center));
    };
    p.set = FeasibleSet::box(lo, hi);
    p.convex = true;
    p.lipschitz_grad = curv.maxCoeff();

    std::vector<ApproximationRule> rule_set;
    rule_set.push_back(rules::conditional_gradient());
    rule_set.push_back(rules::gradient_projection(rng.uniform(0.2, 2.0)));
    rule_set.push_back(rules::jacobi(rng.uniform(0.0, 0.3)));

    for (const auto& rule : rule_set) {
      // Descent inequality at random non-stationary points.
      for (int probe = 0; probe < 2; ++probe) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.uniform(lo(i), hi(i));
        const Vector bx = rule.smooth(p, x);
        if ((bx - x).cwiseAbs().maxCoeff() > 1e-7) {
          descent_ok =
              descent_ok && stationarity_error_smooth(p, x, bx) > 0.0;
          ++descent_checks;
        }
      }
      // Monotone objective along the actual runs.
      for (const auto& step :
           {StepsizeRule::exact(), StepsizeRule::armijo(0.25, 0.5)}) {
        const auto res = solve_smooth(p, rule, step, {1e-8, 400, {}}, x0);
        for (std::size_t i = 1; i < res.trace.records.size(); ++i) {
          monotone_ok = monotone_ok &&
                        res.trace.records[i].objective <=
                            res.trace.records[i - 1].objective + 1e-13;
        }
      }
    }
  }

  // x^3 counterexample raises the non-descent diagnostic.
  SmoothProblem cubic;
  cubic.dim = 1;
  cubic.value = [](const Vector& x) { return x(0) * x(0) * x(0); };
  cubic.grad = [](const Vector& x) {
    return Vector(Vector::Constant(1, 3.0 * x(0) * x(0)));
  };
  cubic.set = FeasibleSet::box(Vector::Constant(1, -1.0), Vector::Ones(1));
  ApproximationRule cubic_rule;
  cubic_rule.smooth = [](const SmoothProblem&, const Vector&) {
    return Vector::Constant(1, -1.0);
  };
  const auto cubic_res = solve_smooth(cubic, cubic_rule, StepsizeRule::armijo(),
                                      {1e-6, 10, {}}, Vector::Zero(1));
  const bool counterexample_ok =
      cubic_res.trace.reason == StopReason::NonDescentDirection;

  // Finite-difference gradient checks on the application objectives.
  bool gradients_ok = true;
  {
    const auto inst = ee::EeInstance::random(4, 8, 0.01, 99);
    const auto value = [&](const Vector& p) { return ee::ee_objective(p, inst); };
    const auto grad = [&](const Vector& p) { return ee::ee_gradient(p, inst); };
    Vector p0(4);
    for (int i = 0; i < 4; ++i) p0(i) = rng.uniform(0.1, 10.0);
    gradients_ok = gradients_ok && check_gradient(value, grad, p0, 1e-6) <= 1e-5;
  }
  {
    const auto inst = mimo::MimoBcInstance::random(2, 3, 2, 10.0, 55);
    mimo::CovariancePoint q;
    for (int k = 0; k < 2; ++k) {
      CMatrix g(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = rng.cgauss();
      CMatrix qq = g * g.adjoint();
      qq *= rng.uniform(0.5, 2.0) / qq.trace().real();
      q.push_back(qq);
    }
    for (int k = 0; k < 2 && gradients_ok; ++k) {
      const auto value = [&](const Vector& v) {
        mimo::CovariancePoint qq = q;
        qq[static_cast<std::size_t>(k)] = hermitian_coords::unpack(v, 3);
        return mimo::bc_objective(qq, inst);
      };
      const auto grad = [&](const Vector& v) {
        mimo::CovariancePoint qq = q;
        qq[static_cast<std::size_t>(k)] = hermitian_coords::unpack(v, 3);
        return hermitian_coords::pack_gradient(
            mimo::bc_gradient(qq, inst)[static_cast<std::size_t>(k)]);
      };
      const Vector v0 = hermitian_coords::pack(q[static_cast<std::size_t>(k)]);
      gradients_ok = gradients_ok && check_gradient(value, grad, v0, 1e-6) <= 1e-5;
    }
  }

  // Reduction identities, bitwise.
  bool reduction_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    Vector curv(n), center(n), lo(n), hi(n), x0(n);
    for (int i = 0; i < n; ++i) {
      curv(i) = rng.uniform(0.2, 3.0);
      center(i) = rng.uniform(-2.0, 2.0);
      lo(i) = rng.uniform(-3.0, -0.2);
      hi(i) = rng.uniform(0.2, 3.0);
      x0(i) = rng.uniform(lo(i), hi(i));
    }
    SmoothProblem p;
    p.dim = n;
    p.value = [curv, center](const Vector& x) {
      return 0.5 * (x - center).cwiseProduct(curv.cwiseSqrt()).squaredNorm();
    };
    p.grad = [curv, center](const Vector& x) {
      return Vector(curv.cwiseProduct(x - center));
    };
    p.set = FeasibleSet::box(lo, hi);
    p.convex = true;

    CompositeProblem cp;
    cp.f = p;
    cp.g = [](const Vector&) { return 0.0; };
    cp.prox = [&cp](const Vector& v, double) { return cp.f.set.project(v); };

    const double s = rng.uniform(0.2, 1.2);
    const auto smooth_res = solve_smooth(p, rules::gradient_projection(s),
                                         StepsizeRule::armijo(), {1e-9, 300, {}},
                                         x0);
    const auto comp_res = solve_composite(cp, rules::proximal_gradient(s),
                                          StepsizeRule::armijo(), {1e-9, 300, {}},
                                          x0);
    reduction_ok = reduction_ok &&
                   smooth_res.trace.records.size() == comp_res.trace.records.size();
    if (reduction_ok) {
      reduction_ok = std::memcmp(smooth_res.x.data(), comp_res.x.data(),
                                 sizeof(double) * n) == 0;
      for (std::size_t i = 0;
           reduction_ok && i < smooth_res.trace.records.size(); ++i) {
        const auto& a = smooth_res.trace.records[i];
        const auto& b = comp_res.trace.records[i];
        reduction_ok = std::memcmp(&a.objective, &b.objective, 8) == 0 &&
                       std::memcmp(&a.gamma, &b.gamma, 8) == 0;
      }
    }
  }

  const bool ok = descent_ok && monotone_ok && counterexample_ok &&
                  gradients_ok && reduction_ok;
  report(8, "framework properties (descent, monotonicity, counterexample, "
            "gradients, reductions)",
         ok,
         fmt("descent checks %d ok=%d, monotone=%d, counterexample=%d, "
             "gradients=%d, reductions=%d",
             descent_checks, descent_ok, monotone_ok, counterexample_ok,
             gradients_ok, reduction_ok));
}

// ---------------------------------------------------------------- criterion 9
void criterion_basis_pursuit() {
  Rng rng(515);
  int ok_count = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Matrix A(2, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) A(i, j) = rng.gauss();
    Vector x_seed = Vector::Zero(4);
    x_seed(static_cast<Eigen::Index>(rng.integer(4))) = rng.uniform(0.5, 2.0);
    const Vector b = A * x_seed;
    const Vector best = oracles::min_l1_by_enumeration(A, b);

    const auto res = lasso::basis_pursuit_solve(A, b);
    if (res.converged && (A * res.x - b).norm() <= 1e-6 &&
        res.x.lpNorm<1>() <= best.lpNorm<1>() + 1e-6) {
      ++ok_count;
    }
  }
  report(9, "basis pursuit reaches LP-verified minimum-l1 solutions",
         ok_count == 20, fmt("%d/20 seeds feasible and l1-optimal", ok_count));
}

}  // namespace

int main() {
  criterion_lasso_desk();
  criterion_stela_vs_flexa();
  criterion_lasso_enumeration();
  criterion_mimo_ordering();
  criterion_waterfilling();
  criterion_ee();
  bool gate_clean = false;
  criterion_eq43_gate(&gate_clean);
  criterion_framework();
  criterion_basis_pursuit();

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
