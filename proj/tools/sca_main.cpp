#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sca/experiment.hpp"

namespace {

struct CommonFlags {
  std::string app;
  std::string spec_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::optional<int> max_iter;
  int workers = 1;
  bool no_timing = false;
};

void attach(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--app", f.app, "Application: lasso | bp | mimo-bc | ee");
  cmd->add_option("--spec", f.spec_file, "Experiment spec JSON file");
  cmd->add_option("--seed", f.seed, "Base instance seed");
  cmd->add_option("--out-dir", f.out_dir, "Output directory");
  cmd->add_option("--tol", f.tol, "Convergence tolerance override");
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap override");
  cmd->add_option("--workers", f.workers, "Concurrent workers for block-parallel steps")
      ->envname("SCA_KIT_WORKERS");
  cmd->add_flag("--no-timing", f.no_timing,
                "Zero the seconds column so traces are bit-reproducible");
}

sca::cli::ExperimentSpec build_spec(const CommonFlags& f, bool race) {
  sca::cli::ExperimentSpec spec;
  if (!f.spec_file.empty()) {
    std::ifstream in(f.spec_file);
    if (!in) throw sca::InvalidInput("cannot open spec: " + f.spec_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw sca::InvalidInput(std::string("bad spec JSON: ") + e.what());
    }
    spec = sca::cli::ExperimentSpec::from_json(j);
    if (!f.app.empty()) spec.app = f.app;
    if (spec.solvers.empty()) {
      spec.solvers = sca::cli::ExperimentSpec::defaults(spec.app, race).solvers;
    }
  } else {
    if (f.app.empty()) throw sca::InvalidInput("either --app or --spec is required");
    spec = sca::cli::ExperimentSpec::defaults(f.app, race);
  }
  if (f.seed) {
    spec.base_seed = *f.seed;
    spec.instance["seed"] = *f.seed;
  }
  if (f.out_dir) spec.out_dir = *f.out_dir;
  if (f.tol || f.max_iter) {
    for (auto& s : spec.solvers) {
      if (f.tol) s.tol = *f.tol;
      if (f.max_iter) s.max_iter = *f.max_iter;
    }
  }
  spec.workers = f.workers;
  spec.timing = !f.no_timing;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Successive pseudo-convex approximation toolkit"};
  app.require_subcommand(1);

  CommonFlags gen_f, run_f, race_f;
  CLI::App* gen = app.add_subcommand("generate", "Write deterministic instance files");
  attach(gen, gen_f);
  CLI::App* run = app.add_subcommand("run", "Run a solver and export traces");
  attach(run, run_f);
  CLI::App* race = app.add_subcommand("race", "Compare solver configurations");
  attach(race, race_f);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return sca::cli::cmd_generate(build_spec(gen_f, false), std::cout);
    if (run->parsed()) return sca::cli::cmd_run(build_spec(run_f, false), std::cout);
    if (race->parsed()) return sca::cli::cmd_race(build_spec(race_f, true), std::cout);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sca::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
