#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sca/ee_max.hpp"
#include "sca/engine.hpp"
#include "sca/hermitian.hpp"
#include "sca/lasso.hpp"
#include "sca/mimo_bc.hpp"
#include "sca/numerics.hpp"

namespace py = pybind11;

namespace {

py::dict trace_dict(const sca::IterateTrace& t) {
  const auto n = t.records.size();
  sca::Vector iters(static_cast<Eigen::Index>(n)), objective(static_cast<Eigen::Index>(n)),
      gamma(static_cast<Eigen::Index>(n)), error(static_cast<Eigen::Index>(n)),
      seconds(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = t.records[i];
    const auto at = static_cast<Eigen::Index>(i);
    iters(at) = r.iter;
    objective(at) = r.objective;
    gamma(at) = r.gamma;
    error(at) = r.error;
    seconds(at) = r.seconds;
  }
  py::dict d;
  d["iter"] = iters;
  d["objective"] = objective;
  d["gamma"] = gamma;
  d["error"] = error;
  d["seconds"] = seconds;
  d["reason"] = std::string(sca::to_string(t.reason));
  d["notices"] = t.notices;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sca_kit, m) {
  m.doc() = "Successive pseudo-convex approximation toolkit";

  m.def("soft_threshold",
        [](const sca::Vector& b, const sca::Vector& a) {
          return sca::soft_threshold(b, a);
        },
        py::arg("b"), py::arg("a"));
  m.def("project_box",
        [](const sca::Vector& x, const sca::Vector& lo, const sca::Vector& hi) {
          return sca::project_box(x, lo, hi);
        },
        py::arg("x"), py::arg("lo"), py::arg("hi"));
  m.def("bisect_root",
        [](const std::function<double(double)>& g, double lo, double hi,
           double tol, int max_iter) {
          return sca::bisect_root(g, sca::Interval(lo, hi), {tol, max_iter});
        },
        py::arg("g"), py::arg("lo"), py::arg("hi"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 64);
  m.def("hermitian_eig",
        [](const sca::CMatrix& mat) {
          const auto r = sca::hermitian_eig(mat);
          return py::make_tuple(r.values, r.vectors);
        },
        py::arg("m"), "Eigenvalues (descending) and unitary eigenvectors");

  m.def("lasso_solve",
        [](const sca::Matrix& A, const sca::Vector& b, double mu, double tol,
           int max_iter, int workers) {
          sca::lasso::LassoInstance inst{A, b, mu};
          sca::lasso::StelaOptions opt;
          opt.err_tol = tol;
          opt.max_iter = max_iter;
          opt.workers = workers;
          const auto r = sca::lasso::stela_solve(inst, opt);
          py::dict d;
          d["x"] = r.x;
          d["converged"] = r.trace.converged();
          d["iterations"] = r.trace.iterations();
          d["objective"] = r.trace.final_objective();
          d["error"] = r.trace.final_error();
          d["trace"] = trace_dict(r.trace);
          return d;
        },
        py::arg("A"), py::arg("b"), py::arg("mu"), py::arg("tol") = 1e-6,
        py::arg("max_iter") = 2000, py::arg("workers") = 1,
        "STELA: soft-thresholding best response with exact line search");
  m.def("lasso_error",
        [](const sca::Vector& x, const sca::Matrix& A, const sca::Vector& b,
           double mu) {
          return sca::lasso::lasso_error(x, {A, b, mu});
        },
        py::arg("x"), py::arg("A"), py::arg("b"), py::arg("mu"));
  m.def("flexa_solve",
        [](const sca::Matrix& A, const sca::Vector& b, double mu,
           double decrease_rate, double gamma0, double tol, int max_iter) {
          sca::lasso::StelaOptions opt;
          opt.err_tol = tol;
          opt.max_iter = max_iter;
          const auto r = sca::lasso::flexa_baseline({A, b, mu}, decrease_rate,
                                                    gamma0, opt);
          py::dict d;
          d["x"] = r.x;
          d["converged"] = r.trace.converged();
          d["iterations"] = r.trace.iterations();
          d["trace"] = trace_dict(r.trace);
          return d;
        },
        py::arg("A"), py::arg("b"), py::arg("mu"), py::arg("decrease_rate"),
        py::arg("gamma0") = 0.9, py::arg("tol") = 1e-6, py::arg("max_iter") = 2000,
        "Decreasing-stepsize baseline sharing the STELA best response");
  m.def("basis_pursuit",
        [](const sca::Matrix& A, const sca::Vector& b, int outer_cap,
           double lambda_tol) {
          sca::lasso::BpOptions opt;
          opt.outer_cap = outer_cap;
          opt.lambda_tol = lambda_tol;
          const auto r = sca::lasso::basis_pursuit_solve(A, b, opt);
          py::dict d;
          d["x"] = r.x;
          d["lam"] = r.lambda;
          d["converged"] = r.converged;
          d["feasibility"] = r.feasibility;
          d["outer_iterations"] = r.outer_iterations;
          return d;
        },
        py::arg("A"), py::arg("b"), py::arg("outer_cap") = 50,
        py::arg("lambda_tol") = 1e-6,
        "min ||x||_1 s.t. Ax = b via augmented-Lagrangian STELA");

  m.def("mimo_bc_random_channels",
        [](int users, int tx, int rx, std::uint64_t seed) {
          return sca::mimo::MimoBcInstance::random(users, tx, rx, 10.0, seed).H;
        },
        py::arg("users"), py::arg("tx"), py::arg("rx"), py::arg("seed") = 1);
  m.def("mimo_bc_solve",
        [](const std::vector<sca::CMatrix>& H, double power_db,
           const std::string& step, double tol, int max_iter, int workers) {
          sca::mimo::MimoBcInstance inst;
          inst.users = static_cast<int>(H.size());
          if (H.empty()) throw sca::InvalidInput("no channels");
          inst.rx = static_cast<int>(H.front().rows());
          inst.tx = static_cast<int>(H.front().cols());
          inst.power = std::pow(10.0, power_db / 10.0);
          inst.H = H;
          sca::mimo::BcOptions opt;
          opt.tol = tol;
          opt.max_iter = max_iter;
          opt.workers = workers;
          if (step == "exact") {
            opt.step = sca::mimo::BcStep::ExactBisection;
          } else if (step == "fixed") {
            opt.step = sca::mimo::BcStep::FixedInverseK;
          } else {
            throw sca::InvalidInput("step must be 'exact' or 'fixed'");
          }
          const auto r = sca::mimo::bc_solve(inst, opt);
          py::dict d;
          d["Q"] = r.Q;
          d["sum_rate"] = r.sum_rate;
          d["iterations"] = r.trace.iterations();
          d["converged"] = r.trace.converged();
          d["trace"] = trace_dict(r.trace);
          d["sum_rates"] = r.sum_rates;
          return d;
        },
        py::arg("H"), py::arg("power_db") = 10.0, py::arg("step") = "exact",
        py::arg("tol") = 1e-4, py::arg("max_iter") = 200, py::arg("workers") = 1,
        "Sum capacity of the MIMO broadcast channel");
  m.def("waterfill_user",
        [](const sca::CMatrix& h, const sca::CMatrix& r, double lambda) {
          return sca::mimo::waterfill_user(h, r, lambda);
        },
        py::arg("h"), py::arg("r"), py::arg("lam"));

  m.def("ee_random_instance",
        [](int users, int antennas, double epsilon, std::uint64_t seed) {
          const auto inst = sca::ee::EeInstance::random(users, antennas, epsilon, seed);
          py::dict d;
          d["w"] = inst.w;
          d["phi"] = inst.phi;
          d["sigma2"] = inst.sigma2;
          d["Pc"] = inst.Pc;
          d["pmin"] = inst.pmin;
          d["pmax"] = inst.pmax;
          return d;
        },
        py::arg("users"), py::arg("antennas"), py::arg("epsilon") = 0.01,
        py::arg("seed") = 1);
  m.def("ee_solve",
        [](const sca::Matrix& w, const sca::Vector& phi, const sca::Vector& sigma2,
           double Pc, const sca::Vector& pmin, const sca::Vector& pmax, double tol,
           int max_iter, int workers) {
          sca::ee::EeInstance inst;
          inst.users = static_cast<int>(w.rows());
          inst.w = w;
          inst.phi = phi;
          inst.sigma2 = sigma2;
          inst.Pc = Pc;
          inst.pmin = pmin;
          inst.pmax = pmax;
          sca::ee::EeOptions opt;
          opt.kkt_tol = tol;
          opt.max_iter = max_iter;
          opt.workers = workers;
          const auto r = sca::ee::ee_solve(inst, opt);
          py::dict d;
          d["p"] = r.p;
          d["ee"] = r.ee;
          d["iterations"] = r.trace.iterations();
          d["converged"] = r.trace.converged();
          d["trace"] = trace_dict(r.trace);
          d["ee_values"] = r.ee_values;
          return d;
        },
        py::arg("w"), py::arg("phi"), py::arg("sigma2"), py::arg("Pc"),
        py::arg("pmin"), py::arg("pmax"), py::arg("tol") = 1e-5,
        py::arg("max_iter") = 200, py::arg("workers") = 1,
        "Energy-efficiency maximization by per-user Dinkelbach best responses");

  // Translators run newest-first, so the derived class goes second.
  py::register_exception<sca::Error>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<sca::InvalidInput>(m, "InvalidInput", PyExc_ValueError);
}
