#include "sca/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sca::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const std::filesystem::path& path, const IterateTrace& trace,
                     const std::vector<TraceColumn>& extra, bool zero_seconds) {
  for (const auto& col : extra) {
    if (col.values.size() != trace.records.size()) {
      throw InvalidInput("trace column '" + col.name + "' has the wrong length");
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot open for writing: " + path.string());
  out << "iter,objective,gamma,error,seconds";
  for (const auto& col : extra) out << "," << col.name;
  out << "\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    out << r.iter << "," << format_double(r.objective) << ","
        << format_double(r.gamma) << "," << format_double(r.error) << ","
        << format_double(zero_seconds ? 0.0 : r.seconds);
    for (const auto& col : extra) out << "," << format_double(col.values[i]);
    out << "\n";
  }
}

ParsedTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open: " + path.string());
  ParsedTrace t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty trace: " + path.string());
  std::istringstream head(line);
  std::string cell;
  while (std::getline(head, cell, ',')) t.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != t.columns.size()) {
      throw InvalidInput("ragged trace row in " + path.string());
    }
    t.rows.push_back(std::move(vals));
  }
  return t;
}

}  // namespace sca::io
