#ifndef NEVPICK_PICK_HPP
#define NEVPICK_PICK_HPP

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nevpick/core.hpp"
#include "nevpick/linalg.hpp"

namespace nevpick {

/// Points x_i, directions v_i in C^m and targets w_i. The sought multiplier F
/// satisfies F(x_i)^* v_i = conj(w_i).
struct TangentialData {
  std::vector<Point> points;
  std::vector<Vector> directions;
  std::vector<cplx> targets;

  static TangentialData scalar(std::vector<Point> pts, std::vector<cplx> w) {
    TangentialData d;
    d.points = std::move(pts);
    d.targets = std::move(w);
    d.directions.assign(d.points.size(), Vector::Ones(1));
    d.validate();
    return d;
  }

  std::size_t size() const { return points.size(); }
  Eigen::Index columns() const { return directions.empty() ? 0 : directions.front().size(); }

  void validate() const {
    require(!points.empty(), "tangential data: need at least one point");
    require(directions.size() == points.size() && targets.size() == points.size(),
            "tangential data: points, directions and targets must have equal lengths");
    const auto m = directions.front().size();
    require(m >= 1, "tangential data: directions must have length >= 1");
    for (std::size_t i = 0; i < directions.size(); ++i) {
      require(directions[i].size() == m, "tangential data: directions must share one length");
      require(directions[i].allFinite() && std::isfinite(std::abs(targets[i])), "tangential data: values must be finite");
      if (directions[i].norm() == 0.0) {
        std::ostringstream msg;
        msg << "tangential data: direction " << i << " is zero";
        throw InputError(msg.str());
      }
    }
  }
};

struct PickMatrix {
  Matrix entries;
  double t = 1.0;
  std::string kernel_label = "full";
};

namespace detail {

// Entries only; the caller checks shapes. Zero directions are allowed here.
inline Matrix pick_entries(const Matrix& k, const std::vector<Vector>& v, const std::vector<cplx>& w, double t) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Matrix out(n, n);
  const double t2 = t * t;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx vv = inner(v[j], v[i]);
      const cplx e = (t2 * vv - w[i] * std::conj(w[j])) * k(i, j);
      out(i, j) = e;
      out(j, i) = std::conj(e);
    }
    out(i, i) = cplx(out(i, i).real(), 0.0);
  }
  return out;
}

}  // namespace detail

/// [(t^2 <v_j, v_i> - w_i conj(w_j)) K_ij]
inline PickMatrix pick_matrix(const Matrix& k, const TangentialData& data, double t,
                              const std::string& label = "full") {
  data.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  require(k.rows() == n && k.cols() == n, "pick_matrix: kernel matrix does not match the data");
  require(t >= 0.0 && std::isfinite(t), "pick_matrix: t must be finite and non-negative");
  PickMatrix p;
  p.t = t;
  p.kernel_label = label;
  p.entries = detail::pick_entries(k, data.directions, data.targets, t);
  return p;
}

struct SolvabilityReport {
  bool solvable = true;
  double lambda_min = 0.0;
  double scale = 1.0;
  /// Per-kernel lambda_min for family decisions.
  std::vector<double> per_kernel;
  int worst = 0;
};

inline SolvabilityReport solvability(const Matrix& k, const TangentialData& data, double tol = tol::kPsdRelative) {
  const auto r = linalg::is_psd(pick_matrix(k, data, 1.0).entries, tol);
  SolvabilityReport out;
  out.solvable = r.psd;
  out.lambda_min = r.lambda_min;
  out.scale = r.scale;
  out.per_kernel = {r.lambda_min};
  return out;
}

/// Conjunction over a family of kernel matrices.
inline SolvabilityReport solvability(const std::vector<Matrix>& family, const TangentialData& data,
                                     double tol = tol::kPsdRelative) {
  require(!family.empty(), "solvability: empty kernel family");
  SolvabilityReport out;
  out.lambda_min = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < family.size(); ++f) {
    const auto r = solvability(family[f], data, tol);
    out.per_kernel.push_back(r.lambda_min);
    out.solvable = out.solvable && r.solvable;
    if (r.lambda_min / r.scale < out.lambda_min / out.scale || f == 0) {
      out.lambda_min = r.lambda_min;
      out.scale = r.scale;
      out.worst = static_cast<int>(f);
    }
  }
  return out;
}

struct MinNormResult {
  double t = 0.0;
  std::string method;
  double lambda_min_at_t = 0.0;
};

inline constexpr double kMinNormCap = 1e12;

/// Least t >= 0 with pick_matrix(k, data, t) PSD.
inline MinNormResult min_norm(const Matrix& k, const TangentialData& data, double tol = tol::kPsdRelative) {
  data.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  require(k.rows() == n && k.cols() == n, "min_norm: kernel matrix does not match the data");
  Matrix a(n, n), b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      a(i, j) = inner(data.directions[j], data.directions[i]) * k(i, j);
      b(i, j) = data.targets[i] * std::conj(data.targets[j]) * k(i, j);
      a(j, i) = std::conj(a(i, j));
      b(j, i) = std::conj(b(i, j));
    }
    a(i, i) = a(i, i).real();
    b(i, i) = b(i, i).real();
  }
  MinNormResult out;
  auto finish = [&](double t, const char* method) {
    out.t = t;
    out.method = method;
    out.lambda_min_at_t = linalg::is_psd(pick_matrix(k, data, t).entries, tol).lambda_min;
    return out;
  };
  if (b.cwiseAbs().maxCoeff() == 0.0) return finish(0.0, "zero targets");

  Eigen::SelfAdjointEigenSolver<Matrix> ea(a);
  const Eigen::VectorXd la = ea.eigenvalues();
  const double a_norm = std::max(std::abs(la(0)), std::abs(la(n - 1)));
  require(a_norm > 0.0, "min_norm: the matrix [<v_j, v_i> K_ij] vanishes");

  if (la(0) > tol::kPencilCondition * a_norm) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ge(b, a, Eigen::EigenvaluesOnly);
    const double top = ge.eigenvalues()(n - 1);
    return finish(std::sqrt(std::max(0.0, top)), "pencil");
  }

  // Singular A: B must vanish on null(A), then bisect.
  const double cut = tol::kPencilCondition * a_norm;
  Eigen::Index null_dim = 0;
  while (null_dim < n && la(null_dim) <= cut) ++null_dim;
  const double b_scale = std::max(1.0, linalg::inf_norm(b));
  if (null_dim > 0) {
    const Matrix nb = ea.eigenvectors().leftCols(null_dim);
    if ((b * nb).cwiseAbs().maxCoeff() > tol * b_scale) {
      throw UnboundedError("min_norm: targets do not vanish where the kernel degenerates; no finite norm works");
    }
  }
  const double lb = Eigen::SelfAdjointEigenSolver<Matrix>(b, Eigen::EigenvaluesOnly).eigenvalues()(n - 1);
  const double lmin_plus = la(null_dim < n ? null_dim : n - 1);
  double hi = std::sqrt(std::max(lb, 0.0) / std::max(lmin_plus, std::numeric_limits<double>::min()));
  hi = std::max(hi, 1e-300);
  auto ok = [&](double t) { return linalg::is_psd(pick_matrix(k, data, t).entries, tol).psd; };
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > kMinNormCap) throw UnboundedError("min_norm: no PSD Pick matrix below the norm cap");
  }
  double lo = 0.0;
  while (hi - lo > tol::kBisection) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return finish(hi, "bisection");
}

}  // namespace nevpick

#endif  // NEVPICK_PICK_HPP
