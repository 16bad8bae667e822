#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sca/errors.hpp"

namespace sca {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Dense Hermitian matrix. Construction validates M == M^H to 1e-12 relative
/// to the largest entry magnitude.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix m);

  const CMatrix& get() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

struct EigResult {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // unitary, column i pairs with values(i)
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Reconstruction error stays below 1e-9 * (1 + max|lambda|) for
/// the desk-scale matrices this library works with (n <= ~30).
EigResult hermitian_eig(const HermitianMatrix& m);

/// Convenience overload validating hermitian-ness first.
EigResult hermitian_eig(const CMatrix& m);

/// True when max|M - M^H| <= tol * (1 + max|M|).
bool is_hermitian(const CMatrix& m, double tol = 1e-12);

}  // namespace sca
