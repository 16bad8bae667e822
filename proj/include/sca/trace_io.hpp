#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sca/problem.hpp"

namespace sca::io {

/// Extra per-iteration column appended after the standard ones (e.g. the
/// sum-rate or EE value of maximization applications).
struct TraceColumn {
  std::string name;
  std::vector<double> values;
};

/// Writes "iter,objective,gamma,error,seconds[,extra...]" with full-precision
/// doubles. zero_seconds drops wall time so files are bit-reproducible.
void write_trace_csv(const std::filesystem::path& path, const IterateTrace& trace,
                     const std::vector<TraceColumn>& extra = {},
                     bool zero_seconds = false);

struct ParsedTrace {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

ParsedTrace read_trace_csv(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace sca::io
