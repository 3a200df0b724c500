#ifndef NEVPICK_TESTS_SUPPORT_HPP
#define NEVPICK_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nevpick/nevpick.hpp"

namespace testsupport {

using nevpick::cplx;
using nevpick::Matrix;
using nevpick::Point;
using nevpick::Vector;

/// Uniform point in the ball of radius r in C^d.
inline Point random_ball_point(std::mt19937_64& rng, int d, double r) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point x(d);
  for (int k = 0; k < d; ++k) x(k) = cplx(g(rng), g(rng));
  const double radius = r * std::pow(u(rng), 1.0 / (2.0 * d));
  return x * (radius / x.norm());
}

inline cplx random_disk(std::mt19937_64& rng, double r) { return random_ball_point(rng, 1, r)(0); }

inline Point pt(std::initializer_list<cplx> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (cplx x : xs) p(k++) = x;
  return p;
}

inline Vector random_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> g;
  Vector v(m);
  for (int k = 0; k < m; ++k) v(k) = cplx(g(rng), g(rng));
  return v;
}

inline cplx random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0 * M_PI);
  return std::polar(1.0, a(rng));
}

// Two-point Schwarz-Pick in plain scalar arithmetic.
inline double rho(cplx a, cplx b) { return std::abs(a - b) / std::abs(1.0 - a * std::conj(b)); }

inline bool sp_solvable(cplx x1, cplx x2, cplx w1, cplx w2, double t) {
  const cplx a = w1 / t, b = w2 / t;
  if (std::max(std::abs(a), std::abs(b)) > 1.0) return false;
  if (a == b) return true;
  if (std::max(std::abs(a), std::abs(b)) == 1.0) return false;
  return rho(a, b) <= rho(x1, x2);
}

/// Least t with sp_solvable, by bisection on the closed-form predicate.
inline double sp_min_norm(cplx x1, cplx x2, cplx w1, cplx w2) {
  const double m = std::max(std::abs(w1), std::abs(w2));
  if (m == 0.0) return 0.0;
  if (w1 == w2) return m;
  double lo = m, hi = 2.0 * m;
  while (!sp_solvable(x1, x2, w1, w2, hi)) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sp_solvable(x1, x2, w1, w2, mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

/// DA kernel by direct summation of the geometric series.
inline cplx da_kernel_series(const Point& x, const Point& y) {
  cplx u = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) u += x(k) * std::conj(y(k));
  cplx sum = 0.0, term = 1.0;
  for (int k = 0; k < 4000 && std::abs(term) > 1e-18; ++k) {
    sum += term;
    term *= u;
  }
  return sum;
}

inline double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace testsupport

#endif  // NEVPICK_TESTS_SUPPORT_HPP
