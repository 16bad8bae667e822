#include "sca/ee_max.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <vector>

#include "sca/numerics.hpp"
#include "sca/parallel.hpp"
#include "sca/rng.hpp"

namespace sca::ee {

namespace {

// Denominator of user j's SINR with and without its own signal term.
double den_interference(int j, const Vector& p, const EeInstance& inst) {
  double acc = inst.sigma2(j) + inst.phi(j) * p(j);
  for (int l = 0; l < inst.users; ++l) {
    if (l != j) acc += inst.w(j, l) * p(l);
  }
  return acc;
}

double den_full(int j, const Vector& p, const EeInstance& inst) {
  return den_interference(j, p, inst) + inst.w(j, j) * p(j);
}

// d r_j / d p_k at p; the j = k case picks up the user's own signal term.
double rate_derivative(int j, int k, const Vector& p, const EeInstance& inst) {
  const double full = den_full(j, p, inst);
  const double intf = den_interference(j, p, inst);
  if (j == k) {
    return (inst.phi(k) + inst.w(k, k)) / full - inst.phi(k) / intf;
  }
  return inst.w(j, k) / full - inst.w(j, k) / intf;
}

// Rate of user k along its own power with the others frozen:
// log(I + (a + w) p) - log(I + a p), I = interference, a = phi, w = w_kk.
double own_rate(double p, double intf, double a, double w) {
  return std::log(intf + (a + w) * p) - std::log(intf + a * p);
}

double own_rate_derivative(double p, double intf, double a, double w) {
  return (a + w) / (intf + (a + w) * p) - a / (intf + a * p);
}

}  // namespace

// Stationary point of the parametric subproblem as the projected positive
// root of the order-2 stationarity polynomial
//   nu a (a+w) p^2 + nu I (2a+w) p + I (nu I + w) = 0.
double parametric_power(double interference, double phi, double w, double nu,
                        double lo, double hi) {
  const double intf = interference;
  const double a = phi;
  const double tiny = 1e-13 * (1.0 + w / intf);
  if (nu >= -tiny) {
    // The rate term is increasing and the linear part does not pull back.
    return hi;
  }
  double p_star;
  if (a <= 1e-14 * w) {
    p_star = -1.0 / nu - intf / w;
  } else {
    const double c0 = intf * (nu * intf + w);
    if (c0 <= 0.0) {
      p_star = 0.0;
    } else {
      const double qa = nu * a * (a + w);
      const double qb = nu * intf * (2.0 * a + w);
      const double disc = nu * intf * w * (nu * intf * w - 4.0 * a * (a + w));
      const double sq = std::sqrt(std::max(disc, 0.0));
      p_star = std::max((-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa));
    }
  }
  return project_box(p_star, lo, hi);
}

void EeInstance::validate() const {
  if (users <= 0) throw InvalidInput("ee: no users");
  if (w.rows() != users || w.cols() != users) throw InvalidInput("ee: bad gain matrix");
  if (phi.size() != users || sigma2.size() != users || pmin.size() != users ||
      pmax.size() != users) {
    throw InvalidInput("ee: vector lengths inconsistent");
  }
  if ((w.array() <= 0.0).any()) throw InvalidInput("ee: gains must be positive");
  if ((phi.array() <= 0.0).any()) throw InvalidInput("ee: phi must be positive");
  if ((sigma2.array() <= 0.0).any()) throw InvalidInput("ee: noise must be positive");
  if (!(Pc > 0.0)) throw InvalidInput("ee: circuit power must be positive");
  if ((pmin.array() <= 0.0).any() || (pmin.array() > pmax.array()).any()) {
    throw InvalidInput("ee: bounds must satisfy 0 < pmin <= pmax");
  }
}

void EeInstance::self_test(std::uint64_t seed) const {
  validate();
  Rng rng(seed);
  Vector p(users);
  for (int k = 0; k < users; ++k) p(k) = rng.uniform(pmin(k), pmax(k));
  const auto value = [this](const Vector& q) { return ee_objective(q, *this); };
  const auto grad = [this](const Vector& q) { return ee_gradient(q, *this); };
  if (check_gradient(value, grad, p, 1e-6) > 1e-5) {
    throw NumericalBreakdown("ee: analytic gradient failed the finite-difference check");
  }
  // Cross gradients are <= 0: interference only hurts the other users.
  for (int k = 0; k < users; ++k) {
    if (user_local(k, p, *this).cross_gradient > 1e-12) {
      throw NumericalBreakdown("ee: cross gradient has the wrong sign");
    }
  }
}

EeInstance EeInstance::random(int users, int antennas, double epsilon,
                              std::uint64_t seed) {
  if (users < 1 || antennas < 1) throw InvalidInput("ee: users and antennas >= 1");
  Rng rng(seed);
  using CVec = Eigen::VectorXcd;
  std::vector<std::vector<CVec>> h(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) {
    h[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(users));
    for (int j = 0; j < users; ++j) {
      CVec v(antennas);
      for (int m = 0; m < antennas; ++m) v(m) = rng.cgauss();
      h[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = v;
    }
  }

  EeInstance inst;
  inst.users = users;
  inst.w.resize(users, users);
  inst.phi.resize(users);
  inst.sigma2 = Vector::Ones(users);
  inst.Pc = 10.0;                       // 10 dBm
  inst.pmin = Vector::Constant(users, 0.1);   // -10 dBm
  inst.pmax = Vector::Constant(users, 10.0);  // 10 dBm

  const auto impairment = [&](int k, int j) {
    // h_kk^H D_j h_kk with D_j = diag(|h_jj(m)|^2).
    const CVec& hkk = h[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    const CVec& hjj = h[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    double acc = 0.0;
    for (int m = 0; m < antennas; ++m) {
      acc += std::norm(hkk(m)) * std::norm(hjj(m));
    }
    return acc;
  };

  for (int k = 0; k < users; ++k) {
    const CVec& hkk = h[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    for (int j = 0; j < users; ++j) {
      if (j == k) {
        const double g = hkk.squaredNorm();
        inst.w(k, k) = g * g;
      } else {
        const CVec& hkj = h[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        inst.w(k, j) = std::norm(hkk.dot(hkj)) + epsilon * impairment(k, j);
      }
    }
    inst.phi(k) = epsilon * impairment(k, k);
  }
  inst.validate();
  return inst;
}

Vector ee_rates(const Vector& p, const EeInstance& inst) {
  Vector r(inst.users);
  for (int k = 0; k < inst.users; ++k) {
    r(k) = std::log(den_full(k, p, inst)) - std::log(den_interference(k, p, inst));
  }
  return r;
}

double ee_objective(const Vector& p, const EeInstance& inst) {
  return ee_rates(p, inst).sum() / (inst.Pc + p.sum());
}

Vector ee_gradient(const Vector& p, const EeInstance& inst) {
  const double denom = inst.Pc + p.sum();
  const double total_rate = ee_rates(p, inst).sum();
  Vector g(inst.users);
  for (int k = 0; k < inst.users; ++k) {
    double drate = 0.0;
    for (int j = 0; j < inst.users; ++j) {
      drate += rate_derivative(j, k, p, inst);
    }
    g(k) = (drate * denom - total_rate) / (denom * denom);
  }
  return g;
}

UserLocal user_local(int k, const Vector& pt, const EeInstance& inst) {
  UserLocal loc;
  loc.interference = inst.sigma2(k);
  for (int j = 0; j < inst.users; ++j) {
    if (j == k) continue;
    loc.interference += inst.w(k, j) * pt(j);
    loc.cross_gradient += rate_derivative(j, k, pt, inst);
    loc.others_power += pt(j);
  }
  const Vector r = ee_rates(pt, inst);
  loc.others_rate = r.sum() - r(k);
  return loc;
}

namespace {

double surrogate_component(double pk, int k, const Vector& pt,
                           const EeInstance& inst, const UserLocal& loc) {
  const double numer = own_rate(pk, loc.interference, inst.phi(k), inst.w(k, k)) +
                       loc.others_rate + (pk - pt(k)) * loc.cross_gradient;
  return numer / (inst.Pc + pk + loc.others_power);
}

}  // namespace

double ee_surrogate(const Vector& p, const Vector& pt, const EeInstance& inst) {
  double acc = 0.0;
  for (int k = 0; k < inst.users; ++k) {
    acc += surrogate_component(p(k), k, pt, inst, user_local(k, pt, inst));
  }
  return acc;
}

Vector ee_surrogate_gradient(const Vector& p, const Vector& pt,
                             const EeInstance& inst) {
  Vector g(inst.users);
  for (int k = 0; k < inst.users; ++k) {
    const UserLocal loc = user_local(k, pt, inst);
    const double numer =
        own_rate(p(k), loc.interference, inst.phi(k), inst.w(k, k)) +
        loc.others_rate + (p(k) - pt(k)) * loc.cross_gradient;
    const double dnumer =
        own_rate_derivative(p(k), loc.interference, inst.phi(k), inst.w(k, k)) +
        loc.cross_gradient;
    const double den = inst.Pc + p(k) + loc.others_power;
    g(k) = (dnumer * den - numer) / (den * den);
  }
  return g;
}

DinkelbachResult dinkelbach_user(int k, const Vector& pt, const EeInstance& inst,
                                 double tol, int max_iter) {
  const UserLocal loc = user_local(k, pt, inst);
  const double a = inst.phi(k);
  const double w = inst.w(k, k);
  const double lo = inst.pmin(k);
  const double hi = inst.pmax(k);

  const auto numerator = [&](double p) {
    return own_rate(p, loc.interference, a, w) + loc.others_rate +
           (p - pt(k)) * loc.cross_gradient;
  };
  const auto denominator = [&](double p) {
    return inst.Pc + p + loc.others_power;
  };
  const auto slope = [&](double p, double nu) {
    return own_rate_derivative(p, loc.interference, a, w) + nu;
  };

  DinkelbachResult res;
  double lambda = 0.0;
  for (int tau = 0; tau < max_iter; ++tau) {
    const double nu = loc.cross_gradient - lambda;
    double p = parametric_power(loc.interference, a, w, nu, lo, hi);

    // The closed form must satisfy the first-order conditions it was derived
    // from; anything else falls back to bisecting the monotone slope.
    const double guard =
        1e-7 * (1.0 + std::abs(slope(lo, nu)) + std::abs(slope(hi, nu)));
    const double sp = slope(p, nu);
    const bool interior_ok = p > lo && p < hi && std::abs(sp) <= guard;
    const bool at_lo_ok = p <= lo && slope(lo, nu) <= guard;
    const bool at_hi_ok = p >= hi && slope(hi, nu) >= -guard;
    if (!(interior_ok || at_lo_ok || at_hi_ok)) {
      res.used_fallback = true;
      if (slope(lo, nu) <= 0.0) {
        p = lo;
      } else if (slope(hi, nu) >= 0.0) {
        p = hi;
      } else {
        const auto neg = [&](double q) { return -slope(q, nu); };
        p = bisect_root(neg, Interval(lo, hi), {1e-12 * (1.0 + hi), 200});
      }
    }

    const double lambda_next = numerator(p) / denominator(p);
    res.p = p;
    res.iterations = tau + 1;
    if (std::abs(lambda_next - lambda) <= tol) {
      res.lambda = lambda_next;
      return res;
    }
    lambda = lambda_next;
    res.lambda = lambda;
  }
  return res;
}

Vector ee_best_response(const Vector& pt, const EeInstance& inst, int workers,
                        bool* fallback_used) {
  Vector bp(inst.users);
  std::atomic<bool> fell_back{false};
  parallel_for(inst.users, workers, [&](Eigen::Index k) {
    const DinkelbachResult r = dinkelbach_user(static_cast<int>(k), pt, inst);
    bp(k) = r.p;
    if (r.used_fallback) fell_back.store(true, std::memory_order_relaxed);
  });
  if (fallback_used) *fallback_used = fell_back.load();
  return bp;
}

double ee_kkt_residual(const Vector& p, const EeInstance& inst) {
  const Vector g = ee_gradient(p, inst);
  const Vector moved = project_box(p + g, inst.pmin, inst.pmax);
  return (p - moved).cwiseAbs().maxCoeff();
}

EeResult ee_solve(const EeInstance& inst, const EeOptions& opt) {
  inst.validate();

  std::atomic<bool> fell_back{false};
  SmoothProblem neg;
  neg.dim = inst.users;
  neg.value = [&inst](const Vector& p) { return -ee_objective(p, inst); };
  neg.grad = [&inst](const Vector& p) { return Vector(-ee_gradient(p, inst)); };
  neg.set = FeasibleSet::box(inst.pmin, inst.pmax);
  neg.convex = false;

  ApproximationRule rule;
  rule.name = "per-user dinkelbach";
  rule.block_parallel = true;
  rule.workers = opt.workers;
  rule.smooth = [&inst, &opt, &fell_back](const SmoothProblem&, const Vector& pt) {
    bool fb = false;
    Vector bp = ee_best_response(pt, inst, opt.workers, &fb);
    if (fb) fell_back.store(true, std::memory_order_relaxed);
    return bp;
  };

  StopRule stop;
  stop.tol = opt.kkt_tol;
  stop.max_iter = opt.max_iter;
  stop.residual = [&inst](const Vector& p) { return ee_kkt_residual(p, inst); };

  SolveResult sr = solve_smooth(neg, rule,
                                StepsizeRule::armijo(opt.armijo_alpha, opt.armijo_beta),
                                stop, inst.pmin);

  EeResult res;
  res.p = std::move(sr.x);
  res.ee = ee_objective(res.p, inst);
  res.trace = std::move(sr.trace);
  if (fell_back.load()) res.trace.notices.push_back("closed-form fallback");
  res.ee_values.reserve(res.trace.records.size());
  for (const auto& rec : res.trace.records) res.ee_values.push_back(-rec.objective);
  return res;
}

}  // namespace sca::ee
