#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sca/instance_io.hpp"

namespace sca::cli {

/// One solver arm of an experiment.
struct SolverConfig {
  std::string name;  // stela | flexa | bp | exact | fixed | regularized | dinkelbach-armijo
  std::optional<double> tol;
  std::optional<int> max_iter;
  double decrease_rate = 0.01;
  double gamma0 = 0.9;
  double alpha = 0.25;
  double beta = 0.5;
  double tau = 1e-5;

  std::string label() const;
};

/// What to solve, with what, how many times, and where results go.
struct ExperimentSpec {
  std::string app;  // lasso | bp | mimo-bc | ee
  nlohmann::json instance;
  std::vector<SolverConfig> solvers;
  int repetitions = 1;
  std::filesystem::path out_dir = ".";
  int workers = 1;
  bool timing = true;
  std::uint64_t base_seed = 1;

  static ExperimentSpec from_json(const nlohmann::json& j);
  /// Built-in desk-scale defaults when no spec file is given.
  static ExperimentSpec defaults(const std::string& app, bool race);
  void validate() const;
};

struct RunSummary {
  int rep = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  double final_objective = 0.0;
  double final_error = 0.0;
  double seconds = 0.0;
  std::string trace_file;
  std::string instance_hash;
};

struct RunReport {
  std::string app;
  std::string solver;
  std::vector<RunSummary> runs;
  double median_iterations = 0.0;
  double median_seconds = 0.0;
  double median_final_objective = 0.0;
  bool all_converged = false;

  nlohmann::json to_json() const;
};

/// Writes deterministic instance files for every repetition. Returns 0.
int cmd_generate(const ExperimentSpec& spec, std::ostream& log);

/// Runs the requested solver over every repetition, writing CSV traces and a
/// JSON report. Returns 0 iff every repetition reached its tolerance.
int cmd_run(const ExperimentSpec& spec, std::ostream& log);

/// Runs every solver arm on identical instances and emits per-repetition
/// aligned iteration-vs-error tables next to the per-arm reports.
int cmd_race(const ExperimentSpec& spec, std::ostream& log);

}  // namespace sca::cli
