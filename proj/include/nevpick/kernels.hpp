#ifndef NEVPICK_KERNELS_HPP
#define NEVPICK_KERNELS_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "nevpick/core.hpp"
#include "nevpick/linalg.hpp"

namespace nevpick {

enum class KernelKind { Szego, DruryArveson, Dirichlet, ExplicitGram };

inline std::string kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::Szego: return "szego";
    case KernelKind::DruryArveson: return "drury_arveson";
    case KernelKind::Dirichlet: return "dirichlet";
    case KernelKind::ExplicitGram: return "explicit_gram";
  }
  return "unknown";
}

inline KernelKind parse_kernel_kind(const std::string& s) {
  if (s == "szego") return KernelKind::Szego;
  if (s == "drury_arveson") return KernelKind::DruryArveson;
  if (s == "dirichlet") return KernelKind::Dirichlet;
  if (s == "explicit_gram") return KernelKind::ExplicitGram;
  throw InputError("unknown kernel type '" + s + "'");
}

/// Declarative description of a complete Nevanlinna-Pick kernel.
///
/// For ExplicitGram the kernel lives on the finite list `gram_points`; a point
/// is identified with the list entry it equals exactly.
struct KernelSpec {
  KernelKind kind = KernelKind::Szego;
  int dim = 1;
  Matrix gram;
  std::vector<Point> gram_points;

  static KernelSpec szego() { return {KernelKind::Szego, 1, {}, {}}; }
  static KernelSpec drury_arveson(int d) {
    require(d >= 1, "drury_arveson: dimension must be >= 1");
    return {KernelKind::DruryArveson, d, {}, {}};
  }
  static KernelSpec dirichlet() { return {KernelKind::Dirichlet, 1, {}, {}}; }

  /// Points default to the labels 0, 1, ..., n-1 on the real line.
  static KernelSpec explicit_gram(const Matrix& g, std::vector<Point> points = {}) {
    require(g.rows() == g.cols() && g.rows() >= 1, "explicit_gram: matrix must be square and non-empty");
    require(g.allFinite(), "explicit_gram: entries must be finite");
    const double scale = std::max(1.0, linalg::inf_norm(g));
    require(linalg::hermitian_defect(g) <= tol::kHermitian * scale, "explicit_gram: matrix must be Hermitian");
    if (points.empty()) {
      for (Eigen::Index i = 0; i < g.rows(); ++i) points.push_back(Point::Constant(1, cplx(double(i), 0.0)));
    }
    require(static_cast<Eigen::Index>(points.size()) == g.rows(), "explicit_gram: point list length must match the matrix");
    const auto d = points.front().size();
    for (const auto& p : points) require(p.size() == d && d >= 1, "explicit_gram: points must share one dimension");
    return {KernelKind::ExplicitGram, static_cast<int>(d), g, std::move(points)};
  }

  bool ball_based() const { return kind != KernelKind::ExplicitGram; }
  std::string name() const { return kernel_kind_name(kind); }

  /// Index of p in gram_points, or -1.
  int gram_index(const Point& p) const {
    for (std::size_t i = 0; i < gram_points.size(); ++i)
      if (gram_points[i].size() == p.size() && gram_points[i] == p) return static_cast<int>(i);
    return -1;
  }
};

inline void check_domain(const KernelSpec& spec, const Point& x) {
  if (x.size() != spec.dim) {
    std::ostringstream msg;
    msg << "point has " << x.size() << " coordinates, kernel " << spec.name() << " expects " << spec.dim;
    throw InputError(msg.str());
  }
  if (!x.allFinite()) throw InputError("point coordinates must be finite");
  if (spec.ball_based()) {
    if (!(x.norm() < 1.0)) {
      std::ostringstream msg;
      msg << "point outside the open unit ball (norm " << x.norm() << ")";
      throw InputError(msg.str());
    }
  } else if (spec.gram_index(x) < 0) {
    throw InputError("point is not in the explicit_gram point list");
  }
}

namespace detail {

/// -log(1-u)/u with the removable singularity at 0 filled by 1.
inline cplx dirichlet_profile(cplx u) {
  if (std::abs(u) < 1e-4) {
    cplx s(0.0), p(1.0);
    for (int k = 1; k <= 8; ++k) {
      s += p / double(k);
      p *= u;
    }
    return s;
  }
  return -std::log(1.0 - u) / u;
}

}  // namespace detail

/// k(x, y); conj(k(y, x)) == k(x, y) holds bit-for-bit for the ball kernels.
inline cplx eval_kernel(const KernelSpec& spec, const Point& x, const Point& y) {
  check_domain(spec, x);
  check_domain(spec, y);
  switch (spec.kind) {
    case KernelKind::Szego:
    case KernelKind::DruryArveson: return 1.0 / (1.0 - inner(x, y));
    case KernelKind::Dirichlet: return detail::dirichlet_profile(inner(x, y));
    case KernelKind::ExplicitGram: return spec.gram(spec.gram_index(x), spec.gram_index(y));
  }
  throw InputError("unknown kernel kind");
}

struct KernelMatrix {
  Matrix values;
  bool has_duplicates = false;
  std::vector<std::pair<int, int>> duplicate_pairs;
  linalg::PsdResult psd;
};

inline KernelMatrix kernel_matrix(const KernelSpec& spec, const std::vector<Point>& points) {
  require(!points.empty(), "kernel_matrix: need at least one point");
  const auto n = static_cast<Eigen::Index>(points.size());
  KernelMatrix out;
  out.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx k = eval_kernel(spec, points[i], points[j]);
      out.values(i, j) = k;
      out.values(j, i) = std::conj(k);
      if (j > i && points[i] == points[j]) {
        out.has_duplicates = true;
        out.duplicate_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
    out.values(i, i) = cplx(out.values(i, i).real(), 0.0);
  }
  out.psd = linalg::is_psd(out.values);
  return out;
}

struct PairReport {
  int i = 0, j = 0;
  cplx kernel_value;
  double minor = 0.0;       // K_ii K_jj - |K_ij|^2
  bool nonorthogonal = false;
  bool independent = false;
};

struct IrreducibilityReport {
  std::vector<PairReport> pairs;
  bool irreducible() const {
    for (const auto& p : pairs)
      if (!p.nonorthogonal || !p.independent) return false;
    return true;
  }
};

inline IrreducibilityReport check_irreducible(const KernelSpec& spec, const std::vector<Point>& points,
                                              double tol = 1e-10) {
  require(points.size() >= 2, "check_irreducible: need at least two points");
  const Matrix k = kernel_matrix(spec, points).values;
  IrreducibilityReport out;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < k.rows(); ++j) {
      PairReport p;
      p.i = static_cast<int>(i);
      p.j = static_cast<int>(j);
      p.kernel_value = k(i, j);
      p.minor = k(i, i).real() * k(j, j).real() - std::norm(k(i, j));
      p.nonorthogonal = std::abs(k(i, j)) > tol;
      p.independent = p.minor > tol;
      out.pairs.push_back(p);
    }
  }
  return out;
}

/// Finite-set embedding of the points into a ball, k_ij = c_i conj(c_j) / (1 - <b_i, b_j>).
struct EmbeddingData {
  Point base;
  std::vector<Vector> vectors;
  std::vector<cplx> constants;
  double lambda_min = 0.0;
  int rank = 0;
  /// Present when b(x) = Q x for every x in the domain (Szego / Drury-Arveson, base 0).
  std::optional<Matrix> linear_map;

  int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
  std::size_t size() const { return vectors.size(); }

  Matrix reconstructed_kernel() const {
    const auto n = static_cast<Eigen::Index>(vectors.size());
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        k(i, j) = constants[i] * std::conj(constants[j]) / (1.0 - inner(vectors[i], vectors[j]));
    return k;
  }

  /// Gram matrix [1 / (1 - <b_i, b_j>)].
  Matrix szego_gram() const {
    const auto n = static_cast<Eigen::Index>(vectors.size());
    Matrix s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) s(i, j) = 1.0 / (1.0 - inner(vectors[i], vectors[j]));
    return s;
  }

  bool can_map_points() const { return linear_map.has_value(); }

  Vector map_point(const Point& x) const {
    if (!linear_map) throw InputError("embedding has no closed form away from its point set");
    require(x.size() == linear_map->cols(), "map_point: dimension mismatch");
    return (*linear_map) * x;
  }
};

namespace detail {

inline Matrix normalized_gram(const KernelSpec& spec, const std::vector<Point>& points, const Point& base,
                              std::vector<cplx>& k_to_base, double& k_base) {
  check_domain(spec, base);
  k_base = eval_kernel(spec, base, base).real();
  if (!(k_base > 0.0)) throw InputError("k(base, base) must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  k_to_base.resize(points.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    k_to_base[i] = eval_kernel(spec, points[i], base);
    if (std::abs(k_to_base[i]) < 1e-300) {
      std::ostringstream msg;
      msg << "degenerate normalization: k(x_" << i << ", base) = 0";
      throw InputError(msg.str());
    }
  }
  const Matrix k = kernel_matrix(spec, points).values;
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = 1.0 - k_to_base[i] * std::conj(k_to_base[j]) / (k_base * k(i, j));
  return 0.5 * (g + g.adjoint());
}

}  // namespace detail

struct CompleteNpCheck {
  bool complete = true;
  double lambda_min = 0.0;
};

inline CompleteNpCheck check_complete_np_finite(const KernelSpec& spec, const std::vector<Point>& points,
                                                const Point& base, double tol = tol::kPsdRelative) {
  require(!points.empty(), "check_complete_np_finite: need at least one point");
  std::vector<cplx> kb;
  double kbb = 0.0;
  const Matrix g = detail::normalized_gram(spec, points, base, kb, kbb);
  const auto r = linalg::is_psd(g, tol);
  return {r.psd, r.lambda_min};
}

inline EmbeddingData embed_points(const KernelSpec& spec, const std::vector<Point>& points, const Point& base,
                                  double tol = tol::kPsdRelative) {
  require(!points.empty(), "embed_points: need at least one point");
  std::vector<cplx> kb;
  double kbb = 0.0;
  const Matrix g = detail::normalized_gram(spec, points, base, kb, kbb);
  const auto psd = linalg::is_psd(g, tol);
  if (!psd.psd) {
    std::ostringstream msg;
    msg << "kernel is not complete-NP at this point set (lambda_min = " << psd.lambda_min << ")";
    throw NotCompletePickError(msg.str(), psd.lambda_min);
  }
  const auto chol = linalg::pivoted_cholesky(g, tol::kCholeskyDrop);
  EmbeddingData out;
  out.base = base;
  out.lambda_min = psd.lambda_min;
  out.rank = chol.rank();
  const Eigen::Index e = std::max<Eigen::Index>(1, chol.rank());
  Matrix rows = Matrix::Zero(g.rows(), e);
  rows.leftCols(chol.rank()) = chol.factor;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    out.vectors.push_back(rows.row(i).transpose());
    out.constants.push_back(kb[i] / std::sqrt(kbb));
  }
  const bool linear = (spec.kind == KernelKind::Szego || spec.kind == KernelKind::DruryArveson) &&
                      base.norm() == 0.0;
  if (linear) {
    Matrix x(g.rows(), spec.dim);
    for (Eigen::Index i = 0; i < g.rows(); ++i) x.row(i) = points[i].transpose();
    // rows = X Q^T
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(x);
    out.linear_map = Matrix(cod.solve(rows).transpose());
  }
  return out;
}

/// Embedding at the origin for ball kernels, at the first point otherwise.
inline Point default_base(const KernelSpec& spec, const std::vector<Point>& points) {
  if (spec.ball_based()) return Point::Zero(spec.dim);
  require(!points.empty(), "default_base: need at least one point");
  return points.front();
}

}  // namespace nevpick

#endif  // NEVPICK_KERNELS_HPP
