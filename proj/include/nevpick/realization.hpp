#ifndef NEVPICK_REALIZATION_HPP
#define NEVPICK_REALIZATION_HPP

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "nevpick/core.hpp"
#include "nevpick/kernels.hpp"
#include "nevpick/linalg.hpp"
#include "nevpick/pick.hpp"
#include "nevpick/polynomial.hpp"
#include "nevpick/truncation.hpp"

namespace nevpick {

enum class Orientation { Column, Row };

struct RealizationCertificate {
  double colligation_norm = 0.0;
  double norm_bound = 0.0;  // gain * colligation_norm
  double max_residual = 0.0;
  int pick_rank = 0;
  int constraints = 0;
  bool rank_collapse = false;
  double lambda_min = 0.0;
};

/// Transfer-function realization
///   G(x) = gain * (D + C (I - Z A)^{-1} Z B),  Z = b(x)^T (x) I_r,
/// with the colligation [A B; C D] a contraction. A is (e r) x r, stacked in e
/// blocks of r rows, one block per coordinate of the embedded point b(x).
struct Realization {
  Matrix A, B, C, D;
  double gain = 1.0;
  EmbeddingData embedding;
  Orientation orientation = Orientation::Column;
  RealizationCertificate certificate;

  Eigen::Index state_dim() const { return A.cols(); }
  Eigen::Index embed_dim() const { return state_dim() == 0 ? 0 : A.rows() / state_dim(); }

  Matrix colligation() const {
    Matrix v(A.rows() + C.rows(), A.cols() + B.cols());
    v << A, B, C, D;
    return v;
  }

  /// gain * Phi(b) for an embedded point b.
  Vector eval_embedded(const Vector& b) const {
    const Eigen::Index r = state_dim();
    if (r == 0) return gain * D.col(0);
    require(b.size() == embed_dim(), "eval_embedded: embedded point has the wrong dimension");
    Matrix za = Matrix::Zero(r, r);
    Matrix zb = Matrix::Zero(r, B.cols());
    for (Eigen::Index l = 0; l < b.size(); ++l) {
      za += b(l) * A.middleRows(l * r, r);
      zb += b(l) * B.middleRows(l * r, r);
    }
    const Matrix x = (Matrix::Identity(r, r) - za).partialPivLu().solve(zb);
    return gain * (D + C * x).col(0);
  }

  /// Value at the i-th point of the embedding.
  Vector eval_at(std::size_t i) const { return eval_embedded(embedding.vectors.at(i)); }

  /// Value at an arbitrary point; needs an embedding with a linear map.
  Vector eval(const Point& x) const { return eval_embedded(embedding.map_point(x)); }

  /// Taylor coefficients of the components up to total degree n, in the
  /// original variables (requires a linear embedding map).
  std::vector<Polynomial> series(int n) const {
    require(embedding.linear_map.has_value(), "series: embedding has no linear map");
    const Matrix& q = *embedding.linear_map;  // e x d
    const auto d = static_cast<int>(q.cols());
    const Eigen::Index m = D.rows();
    std::vector<Polynomial> out(static_cast<std::size_t>(m), Polynomial(d));
    for (Eigen::Index l = 0; l < m; ++l) out[l].add_term(MultiIndex(d, 0), gain * D(l, 0));
    const Eigen::Index r = state_dim();
    if (r == 0 || n < 1) return out;
    std::vector<Matrix> ahat(d, Matrix::Zero(r, r)), bhat(d, Matrix::Zero(r, B.cols()));
    for (int j = 0; j < d; ++j) {
      for (Eigen::Index l = 0; l < q.rows(); ++l) {
        ahat[j] += q(l, j) * A.middleRows(l * r, r);
        bhat[j] += q(l, j) * B.middleRows(l * r, r);
      }
    }
    const auto space = make_space(d, n, 1000000);
    std::vector<Matrix> t(static_cast<std::size_t>(space.size()));
    for (Eigen::Index i = 1; i < space.size(); ++i) {
      const MultiIndex& a = space.monomials[i];
      Matrix acc = Matrix::Zero(r, B.cols());
      for (int j = 0; j < d; ++j) {
        if (a[j] == 0) continue;
        MultiIndex prev = a;
        --prev[j];
        if (total_degree(prev) == 0) acc += bhat[j];
        else acc += ahat[j] * t[space.index_of(prev)];
      }
      t[i] = acc;
      const Matrix coef = gain * (C * acc);
      for (Eigen::Index l = 0; l < m; ++l) out[l].add_term(a, coef(l, 0));
    }
    return out;
  }
};

/// Norm-t column multiplier G with G(x_i)^* v_i = conj(w_i), built by the
/// lurking-isometry argument on the embedded points.
inline Realization solve_interpolant(const EmbeddingData& emb, const TangentialData& data, double t,
                                     double tol = tol::kPsdRelative) {
  data.validate();
  require(t > 0.0 && std::isfinite(t), "solve_interpolant: t must be positive");
  require(emb.size() == data.size(), "solve_interpolant: embedding and data sizes differ");
  const auto n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index m = data.columns();

  const auto pick = linalg::is_psd(pick_matrix(emb.reconstructed_kernel(), data, t).entries, tol);
  if (!pick.psd) {
    std::ostringstream msg;
    msg << "Pick matrix is not PSD at t = " << t << " (lambda_min = " << pick.lambda_min << ")";
    throw InfeasibleError(msg.str(), pick.lambda_min);
  }

  const Matrix s = emb.szego_gram();
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      p(i, j) = (inner(data.directions[j], data.directions[i]) -
                 data.targets[i] * std::conj(data.targets[j]) / (t * t)) * s(i, j);
  const auto chol = linalg::pivoted_cholesky(p, tol::kCholeskyDrop);
  const Eigen::Index r = std::max<Eigen::Index>(1, chol.rank());
  Matrix gamma = Matrix::Zero(n, r);  // row i holds gamma_i^T
  gamma.leftCols(chol.rank()) = chol.factor.conjugate();

  const Eigen::Index e = emb.dim();
  Matrix left(r + 1, n), right(e * r + m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector g = gamma.row(i).transpose();
    left.col(i).head(r) = g;
    left(r, i) = std::conj(data.targets[i]) / t;
    const Vector& b = emb.vectors[i];
    for (Eigen::Index l = 0; l < e; ++l) right.col(i).segment(l * r, r) = std::conj(b(l)) * g;
    right.col(i).tail(m) = data.directions[i];
  }

  // Partial isometry V with V left_i = right_i: polar factor of right * left^*.
  const Matrix cross = right * left.adjoint();
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < sv.size() && sv(keep) > 1e-14 * sv(0)) ++keep;
  const Matrix v = svd.matrixU().leftCols(keep) * svd.matrixV().leftCols(keep).adjoint();

  Realization out;
  out.A = v.topLeftCorner(e * r, r);
  out.B = v.topRightCorner(e * r, 1);
  out.C = v.bottomLeftCorner(m, r);
  out.D = v.bottomRightCorner(m, 1);
  out.gain = t;
  out.embedding = emb;

  auto& cert = out.certificate;
  cert.colligation_norm = linalg::spectral_norm(v);
  cert.norm_bound = t * cert.colligation_norm;
  cert.pick_rank = chol.rank();
  cert.constraints = static_cast<int>(n);
  cert.rank_collapse = chol.rank() < n;
  cert.lambda_min = pick.lambda_min;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector g = out.eval_at(static_cast<std::size_t>(i));
    const cplx lhs = g.dot(data.directions[i]);  // G(x_i)^* v_i
    cert.max_residual = std::max(cert.max_residual, std::abs(lhs - std::conj(data.targets[i])));
  }
  if (!(cert.max_residual <= tol::kConstraintResidual)) {
    std::ostringstream msg;
    msg << "solve_interpolant: constraint residual " << cert.max_residual << " exceeds "
        << tol::kConstraintResidual;
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace nevpick

#endif  // NEVPICK_REALIZATION_HPP
