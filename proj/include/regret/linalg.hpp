#pragma once

#include <Eigen/Dense>
#include <vector>

namespace regret {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigenvalues of a symmetric matrix, ascending.
Vec sym_eigs(const Mat& a);

double min_eig_sym(const Mat& a);
double max_eig_sym(const Mat& a);

/// Operator (spectral) norm of a symmetric matrix: max |eigenvalue|.
double op_norm_sym(const Mat& a);

/// Symmetric PSD square root via eigendecomposition.  Eigenvalues in
/// [-neg_tol, 0] are clamped to 0 (numerical drift); anything below -neg_tol
/// throws ConditioningError because the input was not PSD.
Mat sym_sqrt(const Mat& a, double neg_tol = 1e-10);

/// Solve A x = b for symmetric positive definite A; throws ConditioningError
/// when the factorization fails or A is numerically singular.
Vec solve_spd(const Mat& a, const Vec& b);
Mat solve_spd(const Mat& a, const Mat& b);

/// Force exact symmetry: (A + A^T) / 2.
Mat symmetrize(const Mat& a);

/// Row-major flattening used by the JSON serialization of matrices.
std::vector<double> to_row_major(const Mat& a);
Mat from_row_major(const std::vector<double>& v, int rows, int cols);

}  // namespace regret
