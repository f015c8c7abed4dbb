#pragma once

#include <Eigen/Dense>

#include <vector>

namespace rainbow {

struct TridiagonalEigen {
  std::vector<double> values;  // unsorted, as the iteration leaves them
  Eigen::MatrixXd vectors;     // column k belongs to values[k]
};

/// Implicit-shift QL iteration for a real symmetric tridiagonal matrix.
/// off_diagonal[i] couples rows i and i+1 and must have size n-1.
/// Throws ConvergenceError if an eigenvalue needs more than 60 sweeps.
TridiagonalEigen tridiagonal_ql(std::vector<double> diagonal,
                                std::vector<double> off_diagonal);

struct JacobiSvd {
  Eigen::VectorXd singular_values;  // unsorted, >= 0
  Eigen::MatrixXd U;                // A = U diag(s) V^T
  Eigen::MatrixXd V;
  int sweeps = 0;
};

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
///
/// Plane rotations act on columns only, so the result is invariant under
/// column scaling and the singular values of column-graded matrices keep
/// high relative accuracy. This matters for the rainbow chain, where the
/// couplings span many orders of magnitude.
JacobiSvd one_sided_jacobi_svd(Eigen::MatrixXd A);

}  // namespace rainbow
