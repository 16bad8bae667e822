#include "sca/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "sca/trace_io.hpp"

namespace sca::cli {

namespace {

using nlohmann::json;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

struct PreparedInstance {
  std::filesystem::path header;
  std::string hash;
};

// Materializes the instance for one repetition. Generator specs derive the
// repetition seed as base + rep so "averaged over N instances" runs touch N
// distinct draws; file-backed specs reuse the same data every repetition.
PreparedInstance prepare_instance(const ExperimentSpec& spec, int rep) {
  const json& in = spec.instance;
  PreparedInstance out;
  if (in.contains("file")) {
    out.header = std::filesystem::path(in.at("file").get<std::string>());
    if (!std::filesystem::exists(out.header)) {
      throw InvalidInput("instance file not found: " + out.header.string());
    }
    out.hash = io::file_hash(out.header);
    return out;
  }

  const std::uint64_t seed =
      in.value("seed", spec.base_seed) + static_cast<std::uint64_t>(rep);
  const auto dir = spec.out_dir / "instances";
  std::filesystem::create_directories(dir);
  out.header = dir / (spec.app + "_rep" + std::to_string(rep) + ".json");

  if (spec.app == "lasso") {
    const auto inst = lasso::LassoInstance::random(
        in.value("n", 200), in.value("k", 400), in.value("density", 0.1),
        in.value("noise_var", 1e-4), in.value("mu_factor", 0.1), seed);
    io::save_lasso(out.header, inst);
  } else if (spec.app == "bp") {
    // Exactly consistent right-hand side so the pursuit problem is feasible.
    auto inst = lasso::LassoInstance::random(in.value("n", 2), in.value("k", 4),
                                             in.value("density", 0.25), 0.0,
                                             0.1, seed);
    inst.mu = 1.0;
    io::save_lasso(out.header, inst);
  } else if (spec.app == "mimo-bc") {
    const auto inst = mimo::MimoBcInstance::random(
        in.value("users", 5), in.value("tx", 2), in.value("rx", 2),
        in.value("power_db", 10.0), seed);
    io::save_mimo(out.header, inst);
  } else if (spec.app == "ee") {
    const auto inst = ee::EeInstance::random(in.value("users", 4),
                                             in.value("antennas", 8),
                                             in.value("epsilon", 0.01), seed);
    io::save_ee(out.header, inst);
  } else {
    throw InvalidInput("unknown app: " + spec.app);
  }
  out.hash = io::file_hash(out.header);
  return out;
}

struct ArmOutcome {
  IterateTrace trace;
  std::vector<io::TraceColumn> extra;
  double final_objective = 0.0;
  bool converged = false;
};

ArmOutcome run_arm(const ExperimentSpec& spec, const SolverConfig& cfg,
                   const std::filesystem::path& header) {
  ArmOutcome out;
  if (spec.app == "lasso") {
    const auto inst = io::load_lasso(header);
    lasso::StelaOptions opt;
    opt.err_tol = cfg.tol.value_or(1e-6);
    opt.max_iter = cfg.max_iter.value_or(2000);
    opt.workers = spec.workers;
    SolveResult r;
    if (cfg.name == "stela") {
      r = lasso::stela_solve(inst, opt);
    } else if (cfg.name == "flexa") {
      r = lasso::flexa_baseline(inst, cfg.decrease_rate, cfg.gamma0, opt);
    } else {
      throw InvalidInput("lasso: unknown solver '" + cfg.name + "'");
    }
    out.trace = std::move(r.trace);
    out.final_objective = out.trace.final_objective();
    out.converged = out.trace.converged();
  } else if (spec.app == "bp") {
    const auto inst = io::load_lasso(header);
    lasso::BpOptions opt;
    opt.lambda_tol = cfg.tol.value_or(1e-6);
    opt.outer_cap = cfg.max_iter.value_or(50);
    opt.workers = spec.workers;
    if (cfg.name != "bp") throw InvalidInput("bp: unknown solver '" + cfg.name + "'");
    const auto r = lasso::basis_pursuit_solve(inst.A, inst.b, opt);
    IterateTrace t;
    t.reason = r.converged ? StopReason::Converged : StopReason::MaxIterations;
    t.records.push_back({r.outer_iterations, r.x.lpNorm<1>(), 0.0, r.feasibility, 0.0});
    out.trace = std::move(t);
    out.final_objective = r.x.lpNorm<1>();
    out.converged = r.converged;
  } else if (spec.app == "mimo-bc") {
    const auto inst = io::load_mimo(header);
    mimo::BcOptions opt;
    opt.tol = cfg.tol.value_or(1e-4);
    opt.max_iter = cfg.max_iter.value_or(200);
    opt.workers = spec.workers;
    if (cfg.name == "exact") {
      opt.step = mimo::BcStep::ExactBisection;
    } else if (cfg.name == "fixed") {
      opt.step = mimo::BcStep::FixedInverseK;
    } else if (cfg.name == "regularized") {
      opt.step = mimo::BcStep::RegularizedDecreasing;
      opt.tau = cfg.tau;
      opt.decrease_rate = cfg.decrease_rate;
      opt.gamma0 = std::min(cfg.gamma0, 1.0);
    } else {
      throw InvalidInput("mimo-bc: unknown solver '" + cfg.name + "'");
    }
    auto r = mimo::bc_solve(inst, opt);
    out.extra.push_back({"sum_rate", std::move(r.sum_rates)});
    out.trace = std::move(r.trace);
    out.final_objective = r.sum_rate;
    out.converged = out.trace.converged();
  } else if (spec.app == "ee") {
    const auto inst = io::load_ee(header);
    ee::EeOptions opt;
    opt.kkt_tol = cfg.tol.value_or(1e-5);
    opt.max_iter = cfg.max_iter.value_or(200);
    opt.armijo_alpha = cfg.alpha;
    opt.armijo_beta = cfg.beta;
    opt.workers = spec.workers;
    if (cfg.name != "dinkelbach-armijo") {
      throw InvalidInput("ee: unknown solver '" + cfg.name + "'");
    }
    auto r = ee::ee_solve(inst, opt);
    out.extra.push_back({"ee_value", std::move(r.ee_values)});
    out.final_objective = r.ee;
    out.trace = std::move(r.trace);
    out.converged = out.trace.converged();
  } else {
    throw InvalidInput("unknown app: " + spec.app);
  }
  return out;
}

RunReport make_report(const ExperimentSpec& spec, const SolverConfig& cfg,
                      const std::vector<RunSummary>& runs) {
  RunReport rep;
  rep.app = spec.app;
  rep.solver = cfg.label();
  rep.runs = runs;
  std::vector<double> iters, secs, objs;
  rep.all_converged = !runs.empty();
  for (const auto& r : runs) {
    iters.push_back(static_cast<double>(r.iterations));
    secs.push_back(r.seconds);
    objs.push_back(r.final_objective);
    rep.all_converged = rep.all_converged && r.converged;
  }
  rep.median_iterations = median(iters);
  rep.median_seconds = median(secs);
  rep.median_final_objective = median(objs);
  return rep;
}

RunReport run_solver(const ExperimentSpec& spec, const SolverConfig& cfg,
                     const std::vector<PreparedInstance>& instances,
                     std::ostream& log) {
  std::vector<RunSummary> runs;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    const auto& inst = instances[static_cast<std::size_t>(rep)];
    ArmOutcome arm = run_arm(spec, cfg, inst.header);

    RunSummary sum;
    sum.rep = rep;
    sum.seed = spec.instance.value("seed", spec.base_seed) +
               static_cast<std::uint64_t>(rep);
    sum.iterations = arm.trace.iterations();
    sum.converged = arm.converged;
    sum.final_objective = arm.final_objective;
    sum.final_error = arm.trace.final_error();
    sum.seconds = spec.timing ? arm.trace.total_seconds() : 0.0;
    sum.instance_hash = inst.hash;

    const auto trace_path =
        spec.out_dir / (sanitize(spec.app) + "_" + sanitize(cfg.label()) +
                        "_rep" + std::to_string(rep) + ".csv");
    io::write_trace_csv(trace_path, arm.trace, arm.extra, !spec.timing);
    sum.trace_file = trace_path.filename().string();
    runs.push_back(std::move(sum));

    log << spec.app << " " << cfg.label() << " rep " << rep << ": "
        << (runs.back().converged ? "converged" : "did not converge") << " in "
        << runs.back().iterations << " iterations (error "
        << runs.back().final_error << ")\n";
  }
  return make_report(spec, cfg, runs);
}

void write_report_file(const ExperimentSpec& spec, const RunReport& rep) {
  const auto path = spec.out_dir / (sanitize(spec.app) + "_" +
                                    sanitize(rep.solver) + "_report.json");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot open for writing: " + path.string());
  out << rep.to_json().dump(2) << "\n";
}

}  // namespace

std::string SolverConfig::label() const {
  if (name == "flexa") {
    return name + "_d" + io::format_double(decrease_rate);
  }
  if (name == "regularized") {
    return name + "_d" + io::format_double(decrease_rate);
  }
  return name;
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  ExperimentSpec spec;
  try {
    spec.app = j.at("app").get<std::string>();
    spec.instance = j.value("instance", json::object());
    spec.repetitions = j.value("repetitions", 1);
    if (j.contains("out_dir")) {
      spec.out_dir = j.at("out_dir").get<std::string>();
    }
    const auto parse_solver = [](const json& js) {
      SolverConfig cfg;
      cfg.name = js.at("name").get<std::string>();
      if (js.contains("tol")) cfg.tol = js.at("tol").get<double>();
      if (js.contains("max_iter")) cfg.max_iter = js.at("max_iter").get<int>();
      cfg.decrease_rate = js.value("decrease_rate", cfg.decrease_rate);
      cfg.gamma0 = js.value("gamma0", cfg.gamma0);
      cfg.alpha = js.value("alpha", cfg.alpha);
      cfg.beta = js.value("beta", cfg.beta);
      cfg.tau = js.value("tau", cfg.tau);
      return cfg;
    };
    if (j.contains("solvers")) {
      for (const auto& js : j.at("solvers")) spec.solvers.push_back(parse_solver(js));
    } else if (j.contains("solver")) {
      spec.solvers.push_back(parse_solver(j.at("solver")));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad experiment spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec ExperimentSpec::defaults(const std::string& app, bool race) {
  ExperimentSpec spec;
  spec.app = app;
  spec.instance = json::object();
  const auto named = [](const std::string& name) {
    SolverConfig cfg;
    cfg.name = name;
    return cfg;
  };
  if (app == "lasso") {
    spec.solvers = {named("stela")};
    if (race) {
      SolverConfig flexa = named("flexa");
      flexa.decrease_rate = 0.01;
      // Start inside the stable range of the unregularized parallel update.
      flexa.gamma0 = 0.5;
      spec.solvers.push_back(flexa);
    }
  } else if (app == "bp") {
    spec.solvers = {named("bp")};
  } else if (app == "mimo-bc") {
    spec.solvers = {named("exact")};
    if (race) spec.solvers.push_back(named("fixed"));
  } else if (app == "ee") {
    spec.solvers = {named("dinkelbach-armijo")};
    if (race) {
      SolverConfig slow = named("dinkelbach-armijo");
      slow.alpha = 0.1;
      spec.solvers.push_back(slow);
    }
  } else {
    throw InvalidInput("unknown app: " + app);
  }
  return spec;
}

void ExperimentSpec::validate() const {
  if (app != "lasso" && app != "bp" && app != "mimo-bc" && app != "ee") {
    throw InvalidInput("unknown app: " + app);
  }
  if (solvers.empty()) throw InvalidInput("no solver configured");
  if (repetitions < 1) throw InvalidInput("repetitions must be >= 1");
  if (workers < 1) throw InvalidInput("workers must be >= 1");
}

nlohmann::json RunReport::to_json() const {
  json runs_j = json::array();
  for (const auto& r : runs) {
    runs_j.push_back(json{{"rep", r.rep},
                          {"seed", r.seed},
                          {"iterations", r.iterations},
                          {"converged", r.converged},
                          {"final_objective", r.final_objective},
                          {"final_error", r.final_error},
                          {"seconds", r.seconds},
                          {"trace_file", r.trace_file},
                          {"instance_hash", r.instance_hash}});
  }
  return json{{"app", app},
              {"solver", solver},
              {"runs", runs_j},
              {"aggregate",
               json{{"median_iterations", median_iterations},
                    {"median_seconds", median_seconds},
                    {"median_final_objective", median_final_objective},
                    {"all_converged", all_converged}}}};
}

int cmd_generate(const ExperimentSpec& spec, std::ostream& log) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    const auto inst = prepare_instance(spec, rep);
    log << "wrote " << inst.header.string() << " (hash " << inst.hash << ")\n";
  }
  return 0;
}

int cmd_run(const ExperimentSpec& spec, std::ostream& log) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  std::vector<PreparedInstance> instances;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    instances.push_back(prepare_instance(spec, rep));
  }
  bool all_ok = true;
  for (const auto& cfg : spec.solvers) {
    const RunReport rep = run_solver(spec, cfg, instances, log);
    write_report_file(spec, rep);
    all_ok = all_ok && rep.all_converged;
  }
  return all_ok ? 0 : 1;
}

int cmd_race(const ExperimentSpec& spec, std::ostream& log) {
  spec.validate();
  if (spec.solvers.size() < 2) {
    throw InvalidInput("race needs at least two solver configurations");
  }
  std::filesystem::create_directories(spec.out_dir);
  std::vector<PreparedInstance> instances;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    instances.push_back(prepare_instance(spec, rep));
  }

  bool all_ok = true;
  std::vector<RunReport> reports;
  for (const auto& cfg : spec.solvers) {
    reports.push_back(run_solver(spec, cfg, instances, log));
    write_report_file(spec, reports.back());
    all_ok = all_ok && reports.back().all_converged;
  }

  // Aligned iteration-vs-error table per repetition, one column per arm.
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    std::vector<io::ParsedTrace> traces;
    std::size_t max_rows = 0;
    for (const auto& r : reports) {
      traces.push_back(io::read_trace_csv(
          spec.out_dir / r.runs[static_cast<std::size_t>(rep)].trace_file));
      max_rows = std::max(max_rows, traces.back().rows.size());
    }
    const auto path = spec.out_dir / (sanitize(spec.app) + "_race_rep" +
                                      std::to_string(rep) + ".csv");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InvalidInput("cannot open for writing: " + path.string());
    out << "iter";
    for (const auto& r : reports) out << ",err_" << sanitize(r.solver);
    out << "\n";
    for (std::size_t row = 0; row < max_rows; ++row) {
      out << row;
      for (const auto& t : traces) {
        out << ",";
        if (row < t.rows.size()) out << io::format_double(t.rows[row][3]);
      }
      out << "\n";
    }
    log << "race table: " << path.string() << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace sca::cli
