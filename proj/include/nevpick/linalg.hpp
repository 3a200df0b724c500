#ifndef NEVPICK_LINALG_HPP
#define NEVPICK_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "nevpick/core.hpp"

namespace nevpick::linalg {

/// Maximum absolute row sum.
inline double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double hermitian_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

/// Eigenvalues of the Hermitian part, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

struct PsdResult {
  bool psd = true;
  double lambda_min = 0.0;
  double scale = 1.0;  // max(1, ||M||_inf)
};

/// PSD test: lambda_min >= -tol * max(1, ||M||_inf).
inline PsdResult is_psd(const Matrix& m, double tol = tol::kPsdRelative) {
  require(m.rows() == m.cols(), "is_psd: matrix must be square");
  PsdResult out;
  if (m.rows() == 0) return out;
  out.scale = std::max(1.0, inf_norm(m));
  if (hermitian_defect(m) > tol::kHermitian * out.scale) {
    std::ostringstream msg;
    msg << "is_psd: matrix is not Hermitian (defect " << hermitian_defect(m) << ")";
    throw InputError(msg.str());
  }
  Matrix h = 0.5 * (m + m.adjoint());
  out.lambda_min = hermitian_eigenvalues(h)(0);
  out.psd = out.lambda_min >= -tol * out.scale;
  return out;
}

struct CholeskyFactor {
  Matrix factor;          // n x r, M ~= factor * factor^*
  std::vector<int> pivots;
  double max_residual = 0.0;  // largest dropped diagonal entry
  int rank() const { return static_cast<int>(factor.cols()); }
};

/// Outer-product Cholesky with diagonal pivoting. Stops once every remaining
/// diagonal entry is <= drop * max(1, max_i M_ii).
inline CholeskyFactor pivoted_cholesky(const Matrix& m, double drop = tol::kCholeskyDrop) {
  const Eigen::Index n = m.rows();
  require(m.cols() == n, "pivoted_cholesky: matrix must be square");
  CholeskyFactor out;
  out.factor.resize(n, 0);
  if (n == 0) return out;
  Matrix residual = 0.5 * (m + m.adjoint());
  const double threshold = drop * std::max(1.0, residual.diagonal().real().maxCoeff());
  std::vector<Vector> cols;
  for (Eigen::Index step = 0; step < n; ++step) {
    Eigen::Index j = 0;
    const double d = residual.diagonal().real().maxCoeff(&j);
    if (d <= threshold) break;
    Vector col = residual.col(j) / std::sqrt(d);
    residual.noalias() -= col * col.adjoint();
    cols.push_back(std::move(col));
    out.pivots.push_back(static_cast<int>(j));
  }
  out.factor.resize(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.factor.col(static_cast<Eigen::Index>(k)) = cols[k];
  out.max_residual = std::max(0.0, residual.diagonal().real().maxCoeff());
  return out;
}

/// Minimum-norm least-squares solution of a x = b.
inline Vector min_norm_solve(const Matrix& a, const Vector& b) {
  if (a.cols() == 0) return Vector();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return cod.solve(b);
}

/// Orthonormal basis of the null space of a (columns), via SVD with a relative cut.
inline Matrix null_space(const Matrix& a, double rel = 1e-12) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = rel * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace nevpick::linalg

#endif  // NEVPICK_LINALG_HPP
