#ifndef NEVPICK_TRUNCATION_HPP
#define NEVPICK_TRUNCATION_HPP

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include <Eigen/SVD>

#include "nevpick/core.hpp"
#include "nevpick/linalg.hpp"
#include "nevpick/polynomial.hpp"

namespace nevpick {

/// |alpha|! / alpha!
inline double multinomial(const MultiIndex& a) {
  double m = 1.0;
  int n = 0;
  for (int ak : a) {
    for (int k = 1; k <= ak; ++k) {
      ++n;
      m = m * n / k;
    }
  }
  return m;
}

/// Polynomials of total degree <= N in d variables with the Drury-Arveson norm
/// ||z^alpha||^2 = alpha! / |alpha|!.
struct TruncatedSpace {
  int d = 1;
  int max_degree = 0;
  std::vector<MultiIndex> monomials;
  Eigen::VectorXd weights;
  Eigen::VectorXd multinomials;  // |alpha|! / alpha!
  std::map<MultiIndex, int, GradedLess> index;

  Eigen::Index size() const { return static_cast<Eigen::Index>(monomials.size()); }

  int index_of(const MultiIndex& a) const {
    auto it = index.find(a);
    return it == index.end() ? -1 : it->second;
  }

  /// Weighted inner product <f, g> = sum_alpha w_alpha f_alpha conj(g_alpha).
  cplx inner(const Vector& f, const Vector& g) const {
    return g.dot(weights.cast<cplx>().cwiseProduct(f));
  }
  double norm(const Vector& f) const { return std::sqrt(std::max(0.0, inner(f, f).real())); }
};

inline constexpr Eigen::Index kDefaultMonomialCap = 20000;

namespace detail {

inline void compositions(int total, int slots, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == slots - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur[pos] = a;
    compositions(total - a, slots, cur, pos + 1, out);
  }
}

}  // namespace detail

inline TruncatedSpace make_space(int d, int n, Eigen::Index cap = kDefaultMonomialCap) {
  require(d >= 1, "make_space: dimension must be >= 1");
  require(n >= 0, "make_space: degree must be >= 0");
  // C(n + d, d), guarded against overflow
  double count = 1.0;
  for (int k = 1; k <= d; ++k) count = count * (n + k) / k;
  if (count > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "truncated space has " << count << " monomials, cap is " << cap;
    throw ResourceError(msg.str());
  }
  TruncatedSpace s;
  s.d = d;
  s.max_degree = n;
  MultiIndex cur(d, 0);
  for (int k = 0; k <= n; ++k) detail::compositions(k, d, cur, 0, s.monomials);
  s.weights.resize(s.size());
  s.multinomials.resize(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double m = multinomial(s.monomials[i]);
    s.multinomials(i) = m;
    s.weights(i) = 1.0 / m;
    s.index.emplace(s.monomials[i], static_cast<int>(i));
  }
  return s;
}

inline void check_point(const TruncatedSpace& s, const Point& x) {
  require(x.size() == s.d, "point dimension does not match the truncated space");
  require(x.allFinite() && x.norm() < 1.0, "point must lie in the open unit ball");
}

/// Monomial values x^alpha, one per basis element.
inline Vector monomial_values(const TruncatedSpace& s, const Point& x) {
  Vector v(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) v(i) = monomial_value(s.monomials[i], x);
  return v;
}

/// Coefficients (|alpha|!/alpha!) conj(x)^alpha, so that <f, k_x> = f(x) for deg f <= N.
inline Vector truncated_kernel_vector(const TruncatedSpace& s, const Point& x) {
  check_point(s, x);
  Vector v = monomial_values(s, x).conjugate();
  for (Eigen::Index i = 0; i < s.size(); ++i) v(i) *= s.multinomials(i);
  return v;
}

/// Coefficient vector of p; terms above degree N are rejected unless `truncate`.
inline Vector to_vector(const TruncatedSpace& s, const Polynomial& p, bool truncate = false) {
  require(p.dim() == s.d, "polynomial dimension does not match the truncated space");
  Vector v = Vector::Zero(s.size());
  for (const auto& [a, c] : p.terms()) {
    const int i = s.index_of(a);
    if (i < 0) {
      if (truncate) continue;
      throw InputError("polynomial degree exceeds the truncation degree");
    }
    v(i) = c;
  }
  return v;
}

inline Polynomial to_polynomial(const TruncatedSpace& s, const Vector& v) {
  require(v.size() == s.size(), "vector length does not match the truncated space");
  Polynomial p(s.d);
  for (Eigen::Index i = 0; i < s.size(); ++i) p.add_term(s.monomials[i], v(i));
  return p;
}

/// Compression P_N M_f in the monomial basis.
inline Matrix mult_matrix(const TruncatedSpace& s, const Polynomial& f) {
  require(f.dim() == s.d, "multiplier dimension does not match the truncated space");
  Matrix m = Matrix::Zero(s.size(), s.size());
  for (const auto& [g, c] : f.terms()) {
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const int i = s.index_of(add_indices(s.monomials[j], g));
      if (i >= 0) m(i, j) += c;
    }
  }
  return m;
}

/// W^{1/2} M W^{-1/2}: the matrix of an operator in the orthonormal basis z^alpha / ||z^alpha||.
inline Matrix to_orthonormal_basis(const TruncatedSpace& s, const Matrix& m) {
  const Eigen::VectorXd r = s.weights.cwiseSqrt();
  const Eigen::VectorXd ri = s.multinomials.cwiseSqrt();
  return r.cast<cplx>().asDiagonal() * m * ri.cast<cplx>().asDiagonal();
}

inline double truncated_multiplier_norm(const TruncatedSpace& s, const Polynomial& f) {
  return linalg::spectral_norm(to_orthonormal_basis(s, mult_matrix(s, f)));
}

/// Norm of the column multiplier (f_1, ..., f_m): H -> H^m.
inline double truncated_multiplier_norm(const TruncatedSpace& s, const std::vector<Polynomial>& column) {
  require(!column.empty(), "empty multiplier column");
  Matrix stacked(s.size() * static_cast<Eigen::Index>(column.size()), s.size());
  for (std::size_t l = 0; l < column.size(); ++l)
    stacked.middleRows(static_cast<Eigen::Index>(l) * s.size(), s.size()) =
        to_orthonormal_basis(s, mult_matrix(s, column[l]));
  return linalg::spectral_norm(stacked);
}

/// Columns orthonormal in the weighted inner product.
struct SubspaceBasis {
  Matrix columns;
  bool full = false;

  Eigen::Index rank() const { return columns.cols(); }

  static SubspaceBasis full_space(const TruncatedSpace& s) {
    SubspaceBasis b;
    b.columns = s.multinomials.cwiseSqrt().cast<cplx>().asDiagonal();
    b.full = true;
    return b;
  }
  static SubspaceBasis empty(const TruncatedSpace& s) {
    SubspaceBasis b;
    b.columns.resize(s.size(), 0);
    return b;
  }
};

/// Modified Gram-Schmidt in the weighted inner product, two passes per vector.
/// A vector is dropped when what survives is below `drop` times its original norm.
inline SubspaceBasis orthonormalize(const TruncatedSpace& s, const Matrix& family,
                                    double drop = tol::kGramSchmidtDrop) {
  require(family.rows() == s.size(), "orthonormalize: vector length does not match the truncated space");
  std::vector<Vector> q;
  for (Eigen::Index j = 0; j < family.cols(); ++j) {
    Vector v = family.col(j);
    const double original = s.norm(v);
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) v -= s.inner(v, u) * u;
    const double left = s.norm(v);
    if (left <= drop * original) continue;
    q.push_back(v / left);
  }
  SubspaceBasis b;
  if (static_cast<Eigen::Index>(q.size()) == s.size()) return SubspaceBasis::full_space(s);
  b.columns.resize(s.size(), static_cast<Eigen::Index>(q.size()));
  for (std::size_t k = 0; k < q.size(); ++k) b.columns.col(static_cast<Eigen::Index>(k)) = q[k];
  return b;
}

/// Orthogonal projection Q Q^* W v.
inline Vector project(const TruncatedSpace& s, const SubspaceBasis& basis, const Vector& v) {
  require(v.size() == s.size() && basis.columns.rows() == s.size(), "project: dimension mismatch");
  if (basis.full) return v;
  if (basis.rank() == 0) return Vector::Zero(s.size());
  const Vector wv = s.weights.cast<cplx>().cwiseProduct(v);
  return basis.columns * (basis.columns.adjoint() * wv);
}

/// Gram matrix of the columns in the weighted inner product.
inline Matrix weighted_gram(const TruncatedSpace& s, const Matrix& cols) {
  return cols.adjoint() * s.weights.cast<cplx>().asDiagonal() * cols;
}

}  // namespace nevpick

#endif  // NEVPICK_TRUNCATION_HPP
