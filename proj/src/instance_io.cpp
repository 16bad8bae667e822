#include "sca/instance_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <vector>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "binary payloads are little-endian");

namespace sca::io {

namespace {

using nlohmann::json;

void write_doubles(const std::filesystem::path& path,
                   const std::vector<double>& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!out) throw InvalidInput("write failed: " + path.string());
}

std::vector<double> read_doubles(const std::filesystem::path& path,
                                 std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open for reading: " + path.string());
  std::vector<double> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
    throw InvalidInput("file too short: " + path.string());
  }
  return buf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

std::filesystem::path sibling(const std::filesystem::path& header,
                              const std::string& name) {
  return header.parent_path() / name;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) buf.push_back(m(i, j));
  }
  write_doubles(path, buf);
}

Matrix read_matrix(const std::filesystem::path& path, Eigen::Index rows,
                   Eigen::Index cols) {
  const auto buf =
      read_doubles(path, static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  Matrix m(rows, cols);
  std::size_t at = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = buf[at++];
  }
  return m;
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
  std::vector<double> buf(v.data(), v.data() + v.size());
  write_doubles(path, buf);
}

Vector read_vector(const std::filesystem::path& path, Eigen::Index n) {
  const auto buf = read_doubles(path, static_cast<std::size_t>(n));
  return Eigen::Map<const Vector>(buf.data(), n);
}

void write_cmatrices(const std::filesystem::path& path,
                     const std::vector<CMatrix>& ms) {
  std::vector<double> buf;
  for (const auto& m : ms) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        buf.push_back(m(i, j).real());
        buf.push_back(m(i, j).imag());
      }
    }
  }
  write_doubles(path, buf);
}

std::vector<CMatrix> read_cmatrices(const std::filesystem::path& path,
                                    int count, Eigen::Index rows,
                                    Eigen::Index cols) {
  const std::size_t per =
      2 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  const auto buf = read_doubles(path, per * static_cast<std::size_t>(count));
  std::vector<CMatrix> ms(static_cast<std::size_t>(count));
  std::size_t at = 0;
  for (auto& m : ms) {
    m.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double re = buf[at++];
        const double im = buf[at++];
        m(i, j) = {re, im};
      }
    }
  }
  return ms;
}

void save_lasso(const std::filesystem::path& header,
                const lasso::LassoInstance& inst) {
  inst.validate();
  const std::string stem = header.stem().string();
  const std::string mfile = stem + "_A.bin";
  const std::string vfile = stem + "_b.bin";
  write_matrix(sibling(header, mfile), inst.A);
  write_vector(sibling(header, vfile), inst.b);
  write_json(header, json{{"n", inst.A.rows()},
                          {"k", inst.A.cols()},
                          {"mu", inst.mu},
                          {"matrix_file", mfile},
                          {"vector_file", vfile}});
}

lasso::LassoInstance load_lasso(const std::filesystem::path& header) {
  const json j = read_json(header);
  lasso::LassoInstance inst;
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto k = j.at("k").get<Eigen::Index>();
    inst.mu = j.at("mu").get<double>();
    inst.A = read_matrix(sibling(header, j.at("matrix_file").get<std::string>()), n, k);
    inst.b = read_vector(sibling(header, j.at("vector_file").get<std::string>()), n);
  } catch (const json::exception& e) {
    throw InvalidInput("lasso header " + header.string() + ": " + e.what());
  }
  inst.validate();
  return inst;
}

void save_mimo(const std::filesystem::path& header,
               const mimo::MimoBcInstance& inst) {
  inst.validate();
  const std::string cfile = header.stem().string() + "_H.bin";
  write_cmatrices(sibling(header, cfile), inst.H);
  write_json(header, json{{"K", inst.users},
                          {"nT", inst.tx},
                          {"nR", inst.rx},
                          {"P_dB", 10.0 * std::log10(inst.power)},
                          {"channel_file", cfile}});
}

mimo::MimoBcInstance load_mimo(const std::filesystem::path& header) {
  const json j = read_json(header);
  mimo::MimoBcInstance inst;
  try {
    inst.users = j.at("K").get<int>();
    inst.tx = j.at("nT").get<int>();
    inst.rx = j.at("nR").get<int>();
    inst.power = std::pow(10.0, j.at("P_dB").get<double>() / 10.0);
    inst.H = read_cmatrices(sibling(header, j.at("channel_file").get<std::string>()),
                            inst.users, inst.rx, inst.tx);
  } catch (const json::exception& e) {
    throw InvalidInput("mimo header " + header.string() + ": " + e.what());
  }
  inst.validate();
  return inst;
}

void save_ee(const std::filesystem::path& header, const ee::EeInstance& inst) {
  inst.validate();
  std::vector<std::vector<double>> w(static_cast<std::size_t>(inst.users));
  for (int k = 0; k < inst.users; ++k) {
    w[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(inst.users));
    for (int j = 0; j < inst.users; ++j) {
      w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = inst.w(k, j);
    }
  }
  const auto vec = [](const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  write_json(header, json{{"K", inst.users},
                          {"w", w},
                          {"phi", vec(inst.phi)},
                          {"sigma2", vec(inst.sigma2)},
                          {"Pc", inst.Pc},
                          {"pmin", vec(inst.pmin)},
                          {"pmax", vec(inst.pmax)}});
}

ee::EeInstance load_ee(const std::filesystem::path& header) {
  const json j = read_json(header);
  ee::EeInstance inst;
  try {
    if (j.contains("w")) {
      inst.users = j.at("K").get<int>();
      const auto w = j.at("w").get<std::vector<std::vector<double>>>();
      inst.w.resize(inst.users, inst.users);
      for (int k = 0; k < inst.users; ++k) {
        for (int l = 0; l < inst.users; ++l) {
          inst.w(k, l) = w.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(l));
        }
      }
      const auto vec = [&](const char* key) {
        const auto v = j.at(key).get<std::vector<double>>();
        return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
      };
      inst.phi = vec("phi");
      inst.sigma2 = vec("sigma2");
      inst.Pc = j.at("Pc").get<double>();
      inst.pmin = vec("pmin");
      inst.pmax = vec("pmax");
    } else {
      inst = ee::EeInstance::random(j.at("K").get<int>(), j.at("M").get<int>(),
                                    j.value("epsilon", 0.01),
                                    j.at("seed").get<std::uint64_t>());
    }
  } catch (const json::exception& e) {
    throw InvalidInput("ee header " + header.string() + ": " + e.what());
  }
  inst.self_test();
  return inst;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open: " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sca::io
