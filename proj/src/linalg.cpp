#include "regret/linalg.hpp"

#include <cmath>
#include <string>

#include "regret/errors.hpp"

namespace regret {

Vec sym_eigs(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a),
                                        Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ConditioningError("sym_eigs: eigendecomposition failed");
  }
  return es.eigenvalues();
}

double min_eig_sym(const Mat& a) { return sym_eigs(a).minCoeff(); }

double max_eig_sym(const Mat& a) { return sym_eigs(a).maxCoeff(); }

double op_norm_sym(const Mat& a) {
  const Vec ev = sym_eigs(a);
  return std::max(std::fabs(ev.minCoeff()), std::fabs(ev.maxCoeff()));
}

Mat sym_sqrt(const Mat& a, double neg_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a));
  if (es.info() != Eigen::Success) {
    throw ConditioningError("sym_sqrt: eigendecomposition failed");
  }
  Vec ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -neg_tol) {
      throw ConditioningError(
          "sym_sqrt: matrix has eigenvalue " + std::to_string(ev[i]) +
          " below the PSD tolerance");
    }
    ev[i] = ev[i] < 0.0 ? 0.0 : std::sqrt(ev[i]);
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

// LDLT with an explicit singularity check: isPositive() alone accepts
// semi-definite matrices (e.g. an exactly flat Hessian), whose solves are
// meaningless.  Reject when the pivot range shows rank deficiency.
Eigen::LDLT<Mat> checked_ldlt(const Mat& a) {
  Eigen::LDLT<Mat> ldlt(symmetrize(a));
  const Vec d = ldlt.vectorD();
  const double dmax = d.size() > 0 ? d.maxCoeff() : 0.0;
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(dmax > 0.0) ||
      d.minCoeff() <= dmax * 1e-14) {
    throw ConditioningError("solve_spd: matrix is not positive definite");
  }
  return ldlt;
}

}  // namespace

Vec solve_spd(const Mat& a, const Vec& b) { return checked_ldlt(a).solve(b); }

Mat solve_spd(const Mat& a, const Mat& b) { return checked_ldlt(a).solve(b); }

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

std::vector<double> to_row_major(const Mat& a) {
  std::vector<double> out(static_cast<std::size_t>(a.rows()) *
                          static_cast<std::size_t>(a.cols()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out[k++] = a(i, j);
  }
  return out;
}

Mat from_row_major(const std::vector<double>& v, int rows, int cols) {
  if (v.size() != static_cast<std::size_t>(rows) * cols) {
    throw DomainError("from_row_major: size mismatch");
  }
  Mat a(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = v[k++];
  }
  return a;
}

}  // namespace regret
