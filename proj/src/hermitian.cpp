#include "sca/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sca {

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  if (!is_hermitian(m_)) {
    throw InvalidInput("matrix is not Hermitian within tolerance");
  }
  // Symmetrize so downstream arithmetic sees an exactly Hermitian operand.
  m_ = 0.5 * (m_ + m_.adjoint().eval());
}

namespace {

// One rotation in the (p, q) plane zeroing A(p, q). The unitary is
// U = [[c, s], [-s*e^{-i phi}, c*e^{-i phi}]] where e^{i phi} is the phase of
// A(p, q); conjugating by diag(1, e^{-i phi}) first reduces the 2x2 block to
// the real symmetric case, then a classical Jacobi rotation applies.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
  const std::complex<double> apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const std::complex<double> phase = apq / r;  // e^{i phi}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const std::complex<double> up(c, 0.0);
  const std::complex<double> uq = std::conj(phase) * c;
  const std::complex<double> sq = std::conj(phase) * s;

  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> aip = a(i, p);
    const std::complex<double> aiq = a(i, q);
    a(i, p) = up * aip - sq * aiq;
    a(i, q) = s * aip + uq * aiq;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::complex<double> apj = a(p, j);
    const std::complex<double> aqj = a(q, j);
    a(p, j) = std::conj(up) * apj - std::conj(sq) * aqj;
    a(q, j) = s * apj + std::conj(uq) * aqj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> vip = v(i, p);
    const std::complex<double> viq = v(i, q);
    v(i, p) = up * vip - sq * viq;
    v(i, q) = s * vip + uq * viq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = std::complex<double>(a(p, p).real(), 0.0);
  a(q, q) = std::complex<double>(a(q, q).real(), 0.0);
}

double off_diagonal_norm(const CMatrix& a) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) acc += std::norm(a(i, j));
    }
  }
  return std::sqrt(acc);
}

}  // namespace

EigResult hermitian_eig(const HermitianMatrix& m) {
  const Eigen::Index n = m.dim();
  CMatrix a = m.get();
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double stop = 1e-15 * scale * static_cast<double>(n);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) > 1e-300) rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigResult res;
  res.values.resize(n);
  res.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    res.values(i) = a(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(i)])
                        .real();
    res.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return res;
}

EigResult hermitian_eig(const CMatrix& m) { return hermitian_eig(HermitianMatrix(m)); }

}  // namespace sca
