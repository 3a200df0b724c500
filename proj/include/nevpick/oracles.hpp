#ifndef NEVPICK_ORACLES_HPP
#define NEVPICK_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "nevpick/algebras.hpp"
#include "nevpick/core.hpp"
#include "nevpick/corona.hpp"
#include "nevpick/kernels.hpp"
#include "nevpick/linalg.hpp"
#include "nevpick/pick.hpp"
#include "nevpick/polynomial.hpp"
#include "nevpick/truncation.hpp"

namespace nevpick {

struct OracleReport {
  std::string name;
  std::string method;
  double tolerance = 0.0;
  std::map<std::string, std::string> inputs;
  std::map<std::string, double> values;
  std::map<std::string, bool> flags;
};

struct TwoPointResult {
  bool solvable = false;
  double t_star = 0.0;
  double rho_points = 0.0;
  double rho_targets = 0.0;
  OracleReport report;
};

/// Pseudo-hyperbolic distance |a - b| / |1 - a conj(b)|.
inline double pseudo_hyperbolic(cplx a, cplx b) { return std::abs(a - b) / std::abs(1.0 - a * std::conj(b)); }

/// Closed-form two-point disk problem: decision at norm 1 and the least norm t*.
inline TwoPointResult schwarz_pick_two_point(cplx x1, cplx x2, cplx w1, cplx w2) {
  require(std::abs(x1) < 1.0 && std::abs(x2) < 1.0, "schwarz_pick_two_point: points must lie in the open disk");
  require(x1 != x2, "schwarz_pick_two_point: points coincide");
  TwoPointResult out;
  const double rho = pseudo_hyperbolic(x1, x2);
  out.rho_points = rho;
  const double a = std::norm(w1), b = std::norm(w2);
  const cplx c = w1 * std::conj(w2);
  // (t^2 - a)(t^2 - b) = (1 - rho^2) |t^2 - c|^2, larger root in s = t^2
  const double beta = a + b - 2.0 * (1.0 - rho * rho) * c.real();
  const double disc = std::max(0.0, beta * beta - 4.0 * std::pow(rho, 4) * a * b);
  const double s = (beta + std::sqrt(disc)) / (2.0 * rho * rho);
  out.t_star = std::sqrt(std::max(s, std::max(a, b)));

  if (std::max(std::abs(w1), std::abs(w2)) > 1.0) {
    out.solvable = false;
    out.rho_targets = std::numeric_limits<double>::infinity();
  } else if (w1 == w2) {
    out.solvable = true;
    out.rho_targets = 0.0;
  } else {
    out.rho_targets = pseudo_hyperbolic(w1, w2);
    out.solvable = out.rho_targets <= rho;
  }

  auto& r = out.report;
  r.name = "schwarz_pick_two_point";
  r.method = "closed form";
  std::ostringstream in;
  in.precision(17);
  in << x1 << " " << x2 << " " << w1 << " " << w2;
  r.inputs["x1 x2 w1 w2"] = in.str();
  r.values["t_star"] = out.t_star;
  r.values["rho_points"] = out.rho_points;
  r.values["rho_targets"] = out.rho_targets;
  r.flags["solvable"] = out.solvable;
  return out;
}

struct BruteForceReport {
  double lower = 0.0;           // Pick bound from min_norm on the exact kernel
  double upper = 0.0;           // certified multiplier-norm bound of the best candidate
  double objective = 0.0;       // best descent objective
  double truncated_norm = 0.0;  // truncated multiplier norm of the best candidate
  double gap = 0.0;
  bool converged = false;
  bool budget_exhausted = false;
  int iterations_used = 0;
  std::vector<Polynomial> candidate;
  OracleReport report;
};

struct BruteForceOptions {
  int iterations = 5000;
  int restarts = 20;
  std::uint64_t seed = 0;
  int nodes = 256;            // one-variable objective samples
  int certificate_nodes = 1 << 16;
  double target_gap = 1e-9;
};

namespace detail {

struct DescentProblem {
  int d = 1;
  int m = 1;
  Eigen::Index s = 0;  // monomials of degree <= cap
  Matrix constraints;  // n x (m s)
  Vector rhs;
};

inline Vector lowest_degree_solution(const DescentProblem& p, const TruncatedSpace& space, int cap) {
  const double scale = std::max(1.0, p.rhs.cwiseAbs().maxCoeff());
  for (int k = 0; k <= cap; ++k) {
    std::vector<Eigen::Index> cols;
    for (int l = 0; l < p.m; ++l)
      for (Eigen::Index a = 0; a < p.s; ++a)
        if (total_degree(space.monomials[a]) <= k) cols.push_back(l * p.s + a);
    Matrix sub(p.constraints.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = p.constraints.col(cols[j]);
    const Vector y = linalg::min_norm_solve(sub, p.rhs);
    if ((sub * y - p.rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
      Vector c = Vector::Zero(p.constraints.cols());
      for (std::size_t j = 0; j < cols.size(); ++j) c(cols[j]) = y(static_cast<Eigen::Index>(j));
      return c;
    }
  }
  throw InputError("brute_force_distance: constraints are infeasible at the degree cap");
}

}  // namespace detail

/// Independent estimate of the least multiplier norm of a polynomial
/// interpolant: projected subgradient descent with restarts, bracketed below
/// by the Pick bound.
inline BruteForceReport brute_force_distance(const TruncatedSpace& space, const TangentialData& data, int degree_cap,
                                             const BruteForceOptions& opt = {}) {
  data.validate();
  const int d = space.d;
  require(data.size() <= 3, "brute_force_distance: at most 3 points");
  require(d <= 2, "brute_force_distance: at most 2 variables");
  require(space.max_degree <= 8, "brute_force_distance: truncation degree at most 8");
  require(degree_cap >= 0 && degree_cap <= space.max_degree, "brute_force_distance: degree cap out of range");
  require(opt.iterations >= 1 && opt.restarts >= 1, "brute_force_distance: empty budget");
  for (const auto& x : data.points) check_point(space, x);

  detail::DescentProblem p;
  p.d = d;
  p.m = static_cast<int>(data.columns());
  while (p.s < space.size() && total_degree(space.monomials[p.s]) <= degree_cap) ++p.s;
  const auto n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index nv = p.m * p.s;
  p.constraints.resize(n, nv);
  p.rhs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector mon = monomial_values(space, data.points[i]);
    for (int l = 0; l < p.m; ++l)
      for (Eigen::Index a = 0; a < p.s; ++a) p.constraints(i, l * p.s + a) = std::conj(data.directions[i](l)) * mon(a);
    p.rhs(i) = data.targets[i];
  }

  BruteForceReport out;
  const KernelSpec exact = d == 1 ? KernelSpec::szego() : KernelSpec::drury_arveson(d);
  out.lower = min_norm(kernel_matrix(exact, data.points).values, data).t;

  const Vector c0 = detail::lowest_degree_solution(p, space, degree_cap);
  const Matrix nb = linalg::null_space(p.constraints);

  // Objective and one subgradient at c.
  const double pi = std::acos(-1.0);
  Matrix nodes_pow;
  std::vector<Matrix> shifts;
  if (d == 1) {
    nodes_pow.resize(opt.nodes, p.s);
    for (int j = 0; j < opt.nodes; ++j) {
      const cplx z = std::polar(1.0, 2.0 * pi * j / opt.nodes);
      cplx zk(1.0);
      for (Eigen::Index k = 0; k < p.s; ++k, zk *= z) nodes_pow(j, k) = zk;
    }
  } else {
    for (Eigen::Index a = 0; a < p.s; ++a)
      shifts.push_back(to_orthonormal_basis(space, mult_matrix(space, Polynomial::monomial(space.monomials[a]))));
  }
  const Eigen::Index sz = space.size();
  auto objective = [&](const Vector& c, Vector* grad) -> double {
    if (d == 1) {
      Matrix vals(opt.nodes, p.m);
      for (int l = 0; l < p.m; ++l) vals.col(l) = nodes_pow * c.segment(l * p.s, p.s);
      Eigen::Index j = 0;
      const double best = vals.rowwise().norm().maxCoeff(&j);
      if (grad) {
        grad->setZero(nv);
        if (best > 0.0)
          for (int l = 0; l < p.m; ++l)
            grad->segment(l * p.s, p.s) = nodes_pow.row(j).adjoint() * (vals(j, l) / best);
      }
      return best;
    }
    Matrix op = Matrix::Zero(p.m * sz, sz);
    for (int l = 0; l < p.m; ++l)
      for (Eigen::Index a = 0; a < p.s; ++a)
        if (c(l * p.s + a) != cplx(0.0)) op.middleRows(l * sz, sz) += c(l * p.s + a) * shifts[a];
    Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double best = svd.singularValues()(0);
    if (grad) {
      grad->setZero(nv);
      const Vector u = svd.matrixU().col(0), v = svd.matrixV().col(0);
      for (int l = 0; l < p.m; ++l)
        for (Eigen::Index a = 0; a < p.s; ++a)
          (*grad)(l * p.s + a) = std::conj(u.segment(l * sz, sz).dot(shifts[a] * v));
    }
    return best;
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double s0 = c0.norm() + 1e-12;
  double best = std::numeric_limits<double>::infinity();
  Vector best_c = c0;
  int used = 0;
  bool done = false;
  for (int r = 0; r < opt.restarts && !done; ++r) {
    Vector c = c0;
    if (r > 0 && nb.cols() > 0) {
      Vector z(nb.cols());
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z(k) = cplx(re, im);
      }
      c += nb * z * (0.5 * c0.norm());
    }
    Vector g(nv);
    for (int k = 1; k <= opt.iterations; ++k) {
      ++used;
      const double f = objective(c, &g);
      if (f < best) {
        best = f;
        best_c = c;
      }
      if (best - out.lower <= opt.target_gap) {
        done = true;
        break;
      }
      if (nb.cols() == 0) break;
      Vector pg = nb * (nb.adjoint() * g);
      const double ng = pg.norm();
      if (ng == 0.0) break;
      c -= (s0 / k) * pg / ng;
    }
  }

  out.candidate.assign(static_cast<std::size_t>(p.m), Polynomial(d));
  for (int l = 0; l < p.m; ++l)
    for (Eigen::Index a = 0; a < p.s; ++a) out.candidate[l].add_term(space.monomials[a], best_c(l * p.s + a));
  out.objective = best;
  out.truncated_norm = truncated_multiplier_norm(space, out.candidate);

  if (d == 1) {
    int deg = 0;
    for (const auto& q : out.candidate) deg = std::max(deg, q.degree());
    const int mnodes = opt.certificate_nodes;
    double sup = 0.0;
    for (int j = 0; j < mnodes; ++j) {
      const cplx z = std::polar(1.0, 2.0 * pi * j / mnodes);
      double sq = 0.0;
      for (const auto& q : out.candidate) sq += std::norm(q.is_zero() ? cplx(0.0) : q.eval(Point::Constant(1, z)));
      sup = std::max(sup, std::sqrt(sq));
    }
    out.upper = sup / (1.0 - pi * deg / mnodes);
  } else {
    std::map<int, double> by_degree;
    for (const auto& q : out.candidate)
      for (const auto& [a, c] : q.terms()) by_degree[total_degree(a)] += std::norm(c) / multinomial(a);
    for (const auto& [k, v] : by_degree) out.upper += std::sqrt(v);
  }
  out.gap = out.upper - out.lower;
  out.converged = out.gap <= opt.target_gap;
  out.budget_exhausted = !out.converged;
  out.iterations_used = used;

  auto& rep = out.report;
  rep.name = "brute_force_distance";
  rep.method = d == 1 ? "projected subgradient on sampled sup norm; Bernstein-certified upper bound"
                      : "projected subgradient on truncated multiplier norm; homogeneous-part upper bound";
  rep.tolerance = opt.target_gap;
  rep.inputs["degree_cap"] = std::to_string(degree_cap);
  rep.inputs["truncation_degree"] = std::to_string(space.max_degree);
  rep.inputs["restarts"] = std::to_string(opt.restarts);
  rep.inputs["iterations"] = std::to_string(opt.iterations);
  rep.inputs["seed"] = std::to_string(opt.seed);
  rep.values["lower"] = out.lower;
  rep.values["upper"] = out.upper;
  rep.values["objective"] = out.objective;
  rep.values["truncated_norm"] = out.truncated_norm;
  rep.values["gap"] = out.gap;
  rep.flags["converged"] = out.converged;
  rep.flags["budget_exhausted"] = out.budget_exhausted;
  return out;
}

struct FamilyGridReport {
  CoronaCertificate certificate;
  double worst_lambda_min = 0.0;
  std::vector<cplx> worst_point;
  std::size_t count = 0;
  bool pass = false;
  OracleReport report;
};

/// Corona check over every grid point of the unit sphere in the span of the complement basis.
inline FamilyGridReport family_grid_check(const TruncatedSpace& space, const AlgebraPresentation& alg,
                                          const std::vector<Polynomial>& complement, int resolution,
                                          CoronaProblem problem, const std::vector<Point>& points, double delta) {
  require(complement.size() >= 1 && complement.size() <= 4, "family_grid_check: complement basis length must be 1..4");
  problem.algebra = alg;
  const auto family = sample_family(space, alg, SubspaceFamilySpec::finite_codim_grid(complement, resolution));
  FamilyGridReport out;
  out.certificate = subalgebra_corona_check(space, problem, family, points, delta);
  out.count = family.size();
  const auto* w = out.certificate.worst();
  out.worst_lambda_min = w->lambda_min;
  out.worst_point = w->grid_point;
  out.pass = out.certificate.status == CoronaStatus::Feasible;

  auto& rep = out.report;
  rep.name = "family_grid_check";
  rep.method = "exhaustive sphere grid";
  rep.tolerance = tol::kPsdRelative;
  rep.inputs["resolution"] = std::to_string(resolution);
  rep.inputs["complement_size"] = std::to_string(complement.size());
  rep.values["worst_lambda_min"] = out.worst_lambda_min;
  rep.values["grid_points"] = static_cast<double>(out.count);
  rep.flags["pass"] = out.pass;
  return out;
}

}  // namespace nevpick

#endif  // NEVPICK_ORACLES_HPP
