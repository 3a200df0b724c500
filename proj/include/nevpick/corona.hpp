#ifndef NEVPICK_CORONA_HPP
#define NEVPICK_CORONA_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nevpick/algebras.hpp"
#include "nevpick/core.hpp"
#include "nevpick/kernels.hpp"
#include "nevpick/linalg.hpp"
#include "nevpick/pick.hpp"
#include "nevpick/polynomial.hpp"
#include "nevpick/realization.hpp"
#include "nevpick/truncation.hpp"

namespace nevpick {

inline constexpr const char* kSampledFamilyBanner = "necessary-condition verdict (sampled family)";

struct CoronaProblem {
  std::vector<Polynomial> entries;
  KernelSpec kernel = KernelSpec::szego();
  std::optional<AlgebraPresentation> algebra;  // empty: the full multiplier algebra
  std::optional<double> delta;

  int dim() const { return entries.empty() ? kernel.dim : entries.front().dim(); }

  AlgebraPresentation algebra_or_full() const { return algebra ? *algebra : AlgebraPresentation::full(dim()); }

  void validate() const {
    require(!entries.empty(), "corona problem: need at least one entry");
    bool nonzero = false;
    for (const auto& f : entries) {
      require(f.dim() == entries.front().dim(), "corona problem: entries must share one dimension");
      nonzero = nonzero || !f.is_zero();
    }
    require(nonzero, "corona problem: entries are all zero");
    if (delta) require(*delta > 0.0 && std::isfinite(*delta), "corona problem: delta must be positive");
  }

  /// Row (f_1(x), ..., f_n(x)).
  RowVector row_at(const Point& x) const {
    RowVector r(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) r(static_cast<Eigen::Index>(k)) = entries[k].eval(x);
    return r;
  }
  std::vector<RowVector> rows_at(const std::vector<Point>& pts) const {
    std::vector<RowVector> out;
    for (const auto& x : pts) out.push_back(row_at(x));
    return out;
  }
};

struct CoronaBound {
  double delta_hat = 0.0;
  std::vector<std::pair<int, double>> sweep;  // (degree, delta_hat)
};

/// sigma_min of the row [T_1 ... T_n] of truncated multiplication operators.
inline double corona_delta_hat(const TruncatedSpace& space, const std::vector<Polynomial>& entries) {
  const Eigen::Index s = space.size();
  Matrix row(s, s * static_cast<Eigen::Index>(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k)
    row.middleCols(static_cast<Eigen::Index>(k) * s, s) = to_orthonormal_basis(space, mult_matrix(space, entries[k]));
  Eigen::JacobiSVD<Matrix> svd(row);
  return svd.singularValues()(s - 1);
}

inline CoronaBound corona_lower_bound(const TruncatedSpace& space, const CoronaProblem& problem) {
  problem.validate();
  int top = 0;
  for (const auto& f : problem.entries) top = std::max(top, f.degree());
  require(top <= space.max_degree, "corona_lower_bound: entry degree exceeds the truncation degree");
  CoronaBound out;
  out.delta_hat = corona_delta_hat(space, problem.entries);
  out.sweep.emplace_back(space.max_degree, out.delta_hat);
  for (int n = space.max_degree - 2; n >= std::max(0, space.max_degree - 4); n -= 2) {
    if (n < top) break;
    out.sweep.emplace_back(n, corona_delta_hat(make_space(space.d, n), problem.entries));
  }
  return out;
}

/// Tangential data of the corona reduction: v_i = F(x_i)^*, w_i = delta.
inline TangentialData corona_data(const std::vector<Point>& points, const std::vector<RowVector>& f_values,
                                  double delta) {
  require(points.size() == f_values.size(), "corona: one row of values per point");
  TangentialData d;
  d.points = points;
  for (const auto& row : f_values) {
    d.directions.push_back(row.adjoint());
    d.targets.emplace_back(delta, 0.0);
  }
  return d;
}

struct CoronaPointCheck {
  bool psd = true;
  double lambda_min = 0.0;
  Matrix pick;
};

inline CoronaPointCheck corona_check_points(const Matrix& k, const std::vector<Point>& points,
                                            const std::vector<RowVector>& f_values, double delta,
                                            double tol = tol::kPsdRelative) {
  require(delta > 0.0 && std::isfinite(delta), "corona_check_points: delta must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  require(n >= 1, "corona_check_points: need at least one point");
  require(k.rows() == n && k.cols() == n, "corona_check_points: kernel matrix does not match the points");
  const auto d = corona_data(points, f_values, delta);
  for (const auto& v : d.directions)
    require(v.size() == d.directions.front().size() && v.allFinite(), "corona_check_points: rows must share one finite length");
  // a point where every entry vanishes is a common zero; the matrix still decides
  const Matrix p = detail::pick_entries(k, d.directions, d.targets, 1.0);
  const auto r = linalg::is_psd(p, tol);
  return {r.psd, r.lambda_min, p};
}

/// Column G with F(x_i) G(x_i) = 1 and norm at most 1/delta.
inline Realization corona_solve_points(const EmbeddingData& emb, const std::vector<Point>& points,
                                       const std::vector<RowVector>& f_values, double delta) {
  require(delta > 0.0, "corona_solve_points: delta must be positive");
  require(points.size() == f_values.size(), "corona: one row of values per point");
  for (std::size_t i = 0; i < f_values.size(); ++i)
    if (f_values[i].norm() == 0.0)
      throw InfeasibleError("corona: entries vanish together at point " + std::to_string(i), -delta * delta);
  Realization r = solve_interpolant(emb, corona_data(points, f_values, delta), 1.0);
  r.gain = 1.0 / delta;
  r.certificate.norm_bound = r.gain * r.certificate.colligation_norm;
  r.certificate.max_residual = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const cplx fg = (f_values[i] * r.eval_at(i))(0, 0);
    r.certificate.max_residual = std::max(r.certificate.max_residual, std::abs(fg - 1.0));
  }
  return r;
}

/// Largest delta passing corona_check_points, by bisection to `tol`.
inline double corona_delta_search(const Matrix& k, const std::vector<Point>& points,
                                  const std::vector<RowVector>& f_values, double tol = tol::kDeltaSearch) {
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& row : f_values) hi = std::min(hi, row.norm());
  if (!(hi > 0.0)) return 0.0;
  if (corona_check_points(k, points, f_values, hi).psd) return hi;
  double lo = 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (corona_check_points(k, points, f_values, mid).psd) lo = mid;
    else hi = mid;
  }
  return lo;
}

enum class CoronaStatus { Feasible, Infeasible, Undetermined };

inline std::string corona_status_name(CoronaStatus s) {
  switch (s) {
    case CoronaStatus::Feasible: return "feasible";
    case CoronaStatus::Infeasible: return "infeasible";
    case CoronaStatus::Undetermined: return "undetermined";
  }
  return "unknown";
}

struct CoronaWitness {
  std::string label;
  double lambda_min = 0.0;
  bool pass = true;
  int point = -1;  // most offending point when the check fails
  std::vector<cplx> grid_point;
};

struct CoronaCertificate {
  CoronaStatus status = CoronaStatus::Undetermined;
  double delta_estimate = 0.0;
  std::vector<CoronaWitness> witnesses;
  std::optional<Realization> solution;
  std::string banner = kSampledFamilyBanner;

  const CoronaWitness* worst() const {
    const CoronaWitness* w = nullptr;
    for (const auto& x : witnesses)
      if (!w || x.lambda_min < w->lambda_min) w = &x;
    return w;
  }
};

namespace detail {

inline int offending_point(const Matrix& pick) {
  Eigen::Index i = 0;
  if (pick.diagonal().real().minCoeff(&i) < 0.0) return static_cast<int>(i);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pick);
  es.eigenvectors().col(0).cwiseAbs().maxCoeff(&i);
  return static_cast<int>(i);
}

inline void require_members(const TruncatedSpace& space, const CoronaProblem& problem) {
  const auto alg = problem.algebra_or_full();
  for (std::size_t k = 0; k < problem.entries.size(); ++k) {
    const auto m = membership(alg, problem.entries[k], space.max_degree);
    if (!m.member) {
      std::ostringstream msg;
      msg << "corona entry " << k << " is not in the algebra at degree " << space.max_degree
          << " (residual " << m.residual << ")";
      throw InputError(msg.str());
    }
  }
}

}  // namespace detail

/// Runs the point check against every sampled compressed kernel. A pass is a
/// necessary-condition verdict over the sample only.
inline CoronaCertificate subalgebra_corona_check(const TruncatedSpace& space, const CoronaProblem& problem,
                                                 const std::vector<FamilyMember>& family,
                                                 const std::vector<Point>& points, double delta) {
  problem.validate();
  require(!family.empty(), "subalgebra_corona_check: empty family");
  require(!points.empty(), "subalgebra_corona_check: need at least one point");
  detail::require_members(space, problem);
  const auto rows = problem.rows_at(points);
  CoronaCertificate cert;
  cert.delta_estimate = delta;
  bool all = true;
  for (const auto& member : family) {
    const Matrix k = member.basis.full ? kernel_matrix(problem.kernel, points).values
                                       : compressed_kernel(space, member.basis, points);
    const auto check = corona_check_points(k, points, rows, delta);
    CoronaWitness w;
    w.label = member.label;
    w.lambda_min = check.lambda_min;
    w.pass = check.psd;
    w.grid_point = member.grid_point;
    if (!check.psd) w.point = detail::offending_point(check.pick);
    all = all && check.psd;
    cert.witnesses.push_back(std::move(w));
  }
  cert.status = all ? CoronaStatus::Feasible : CoronaStatus::Infeasible;
  return cert;
}

/// Column of algebra elements meeting the constraints, via a partition of
/// unity over the degree-N equivalence classes. No norm control.
inline std::vector<Polynomial> subalgebra_interpolant_unnormed(const TruncatedSpace& space,
                                                               const AlgebraPresentation& alg,
                                                               const TangentialData& data,
                                                               const std::vector<Point>& points) {
  data.validate();
  require(points.size() == data.size(), "subalgebra_interpolant_unnormed: points and data differ in length");
  const int n = space.max_degree;
  const auto classes = point_equivalence(alg, points, n);
  const auto e = partition_of_unity(alg, points, classes, n);
  const Eigen::Index m = data.columns();
  std::vector<Polynomial> column(static_cast<std::size_t>(m), Polynomial(alg.d));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& block = classes.blocks[k];
    // v_i^* c = w_i for every i in the class
    Matrix a(static_cast<Eigen::Index>(block.size()), m);
    Vector b(static_cast<Eigen::Index>(block.size()));
    for (std::size_t r = 0; r < block.size(); ++r) {
      a.row(static_cast<Eigen::Index>(r)) = data.directions[block[r]].adjoint();
      b(static_cast<Eigen::Index>(r)) = data.targets[block[r]];
    }
    const Vector c = linalg::min_norm_solve(a, b);
    const double residual = (a * c - b).cwiseAbs().maxCoeff();
    if (!(residual <= tol::kPartition)) {
      std::ostringstream msg;
      msg << "data is inconsistent on equivalence class " << k << " (points";
      for (int i : block) msg << " " << i;
      msg << "; residual " << residual << ")";
      throw InfeasibleError(msg.str(), residual);
    }
    for (Eigen::Index l = 0; l < m; ++l) column[l] += e[k] * c(l);
  }
  return column;
}

}  // namespace nevpick

#endif  // NEVPICK_CORONA_HPP
