#pragma once

#include <algorithm>
#include <cmath>

#include "dilation/types.hpp"

namespace dilation {
namespace linalg {

/// Largest singular value; 0 for empty matrices.
template <class Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  const Plain m = a.eval();
  const Plain g = m.rows() < m.cols() ? Plain(m * m.adjoint()) : Plain(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Plain> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

template <class DerivedA, class DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  mat_type<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian part; +inf for empty input.
double min_eigenvalue(const Mat& hermitian);

/// Eigenvalues (ascending) of the Hermitian part.
RealVec eigenvalues(const Mat& hermitian);

/// Factor F with F^H F = G from the eigendecomposition of a PSD matrix.
/// Rows are sqrt(lambda) v^H for the eigenvalues above the cutoff, in
/// descending eigenvalue order.
struct HermitianFactor {
  Mat factor;           // rank x n
  Mat pinv;             // n x rank, pinv * factor = projection onto the kept range
  RealVec eigenvalues;  // all eigenvalues, ascending
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double cutoff = 0.0;
  Index rank() const { return factor.rows(); }
  /// Number of eigenvalues in [cutoff/10, cutoff*10].
  int ambiguous = 0;
};

HermitianFactor hermitian_factor(const Mat& gram, double cutoff);

/// Rank-revealing diagonally pivoted Cholesky, R^H R = G. Stops once the
/// largest remaining diagonal is <= abs_tol.
Mat pivoted_cholesky(const Mat& gram, double abs_tol);

/// Moore-Penrose inverse with relative singular-value cutoff.
Mat pinv(const Mat& a, double rtol = 1e-12);

/// Orthonormal basis of the column range.
Mat range_basis(const Mat& a, double rtol = 1e-10);

/// Orthonormal basis of the (right) null space.
Mat null_basis(const Mat& a, double rtol = 1e-10);

/// Distance between the column ranges of two matrices: max of the two
/// one-sided projection defects.
double subspace_distance(const Mat& a, const Mat& b, double rtol = 1e-10);

}  // namespace linalg
}  // namespace dilation
