#pragma once

#include <filesystem>
#include <string>

#include "sca/ee_max.hpp"
#include "sca/lasso.hpp"
#include "sca/mimo_bc.hpp"

namespace sca::io {

// Dense buffers travel as little-endian 64-bit floats, row major; complex
// entries interleave (re, im). A small JSON header names the payload files.

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path, Eigen::Index rows,
                   Eigen::Index cols);
void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path, Eigen::Index n);
void write_cmatrices(const std::filesystem::path& path,
                     const std::vector<CMatrix>& ms);
std::vector<CMatrix> read_cmatrices(const std::filesystem::path& path,
                                    int count, Eigen::Index rows,
                                    Eigen::Index cols);

/// Writes {n, k, mu, matrix_file, vector_file} next to the binary payloads.
void save_lasso(const std::filesystem::path& header,
                const lasso::LassoInstance& inst);
lasso::LassoInstance load_lasso(const std::filesystem::path& header);

/// Writes {K, nT, nR, P_dB, channel_file} plus the interleaved channels.
void save_mimo(const std::filesystem::path& header,
               const mimo::MimoBcInstance& inst);
mimo::MimoBcInstance load_mimo(const std::filesystem::path& header);

/// Self-contained JSON: {K, M?, epsilon?, seed?, w, phi, sigma2, Pc, pmin,
/// pmax}. Loading runs the instance self test.
void save_ee(const std::filesystem::path& header, const ee::EeInstance& inst);
ee::EeInstance load_ee(const std::filesystem::path& header);

/// FNV-1a over a file's bytes; used to assert identical instances across
/// race arms.
std::string file_hash(const std::filesystem::path& path);

}  // namespace sca::io
