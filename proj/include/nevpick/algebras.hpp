#ifndef NEVPICK_ALGEBRAS_HPP
#define NEVPICK_ALGEBRAS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nevpick/core.hpp"
#include "nevpick/linalg.hpp"
#include "nevpick/polynomial.hpp"
#include "nevpick/truncation.hpp"

namespace nevpick {

enum class AlgebraForm { UnitalGenerated, ConstantsPlusIdeal };

/// A unital algebra of polynomial multipliers: either generated by `generators`
/// together with 1, or C + (ideal generated by `generators`).
struct AlgebraPresentation {
  AlgebraForm form = AlgebraForm::UnitalGenerated;
  int d = 1;
  std::vector<Polynomial> generators;

  static AlgebraPresentation full(int d) {
    AlgebraPresentation a{AlgebraForm::UnitalGenerated, d, {}};
    for (int k = 0; k < d; ++k) a.generators.push_back(Polynomial::coordinate(d, k));
    return a;
  }
  static AlgebraPresentation unital(int d, std::vector<Polynomial> gens) {
    AlgebraPresentation a{AlgebraForm::UnitalGenerated, d, std::move(gens)};
    a.validate();
    return a;
  }
  static AlgebraPresentation constants_plus_ideal(int d, std::vector<Polynomial> gens) {
    AlgebraPresentation a{AlgebraForm::ConstantsPlusIdeal, d, std::move(gens)};
    a.validate();
    return a;
  }

  void validate() const {
    require(d >= 1, "algebra dimension must be >= 1");
    for (const auto& g : generators) require(g.dim() == d, "algebra generator dimension mismatch");
  }

  std::string form_name() const {
    return form == AlgebraForm::UnitalGenerated ? "unital" : "constants_plus_ideal";
  }
};

inline constexpr std::size_t kDefaultProductCap = 50000;

/// Row-echelon basis of a subspace of a truncated space, pivots at the highest
/// significant monomial index.
class Echelon {
 public:
  explicit Echelon(double rel = 1e-10) : rel_(rel) {}

  Vector reduce(Vector v) const {
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      const cplx c = v(it->first);
      if (c == cplx(0.0)) continue;
      v -= c * it->second;
      v(it->first) = 0.0;
    }
    return v;
  }

  /// Adds v if it is independent of the current rows; returns whether it was added.
  bool insert(const Vector& v) {
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    Vector r = reduce(v);
    Eigen::Index p = r.size() - 1;
    while (p >= 0 && std::abs(r(p)) <= rel_ * scale) --p;
    if (p < 0) return false;
    r.tail(r.size() - p - 1).setZero();
    r /= r(p);
    r(p) = 1.0;
    rows_.emplace(static_cast<int>(p), std::move(r));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  double rel_;
  std::map<int, Vector> rows_;
};

namespace detail {

struct SpanningSet {
  TruncatedSpace space;
  std::vector<Polynomial> elements;
  Echelon echelon;
};

inline void unital_products(const std::vector<Polynomial>& gens, std::size_t first, const Polynomial& current,
                            int degree, int n, std::size_t cap, std::size_t& count,
                            std::vector<Polynomial>& out) {
  for (std::size_t j = first; j < gens.size(); ++j) {
    const int dj = gens[j].degree();
    if (degree + dj > n) continue;
    if (++count > cap) {
      std::ostringstream msg;
      msg << "spanning set enumeration exceeded " << cap << " products";
      throw ResourceError(msg.str());
    }
    Polynomial next = current * gens[j];
    out.push_back(next);
    unital_products(gens, j, next, degree + dj, n, cap, count, out);
  }
}

inline SpanningSet build_spanning(const AlgebraPresentation& alg, int n, std::size_t cap) {
  alg.validate();
  require(n >= 0, "spanning set degree must be >= 0");
  SpanningSet out{make_space(alg.d, n), {}, Echelon()};
  std::vector<Polynomial> candidates{Polynomial::constant(alg.d, 1.0)};
  std::size_t count = 1;
  if (alg.form == AlgebraForm::UnitalGenerated) {
    std::vector<Polynomial> gens;
    for (const auto& g : alg.generators)
      if (g.degree() >= 1) gens.push_back(g);
    const Polynomial one = candidates.front();
    unital_products(gens, 0, one, 0, n, cap, count, candidates);
  } else {
    for (const auto& g : alg.generators) {
      if (g.is_zero()) continue;
      for (const auto& m : out.space.monomials) {
        if (total_degree(m) + g.degree() > n) break;
        if (++count > cap) {
          std::ostringstream msg;
          msg << "spanning set enumeration exceeded " << cap << " products";
          throw ResourceError(msg.str());
        }
        candidates.push_back(Polynomial::monomial(m) * g);
      }
    }
  }
  for (auto& c : candidates)
    if (out.echelon.insert(to_vector(out.space, c))) out.elements.push_back(std::move(c));
  return out;
}

}  // namespace detail

/// Spanning set of the algebra's polynomial elements of degree <= n, starting with 1.
inline std::vector<Polynomial> spanning_monomials(const AlgebraPresentation& alg, int n,
                                                  std::size_t cap = kDefaultProductCap) {
  return detail::build_spanning(alg, n, cap).elements;
}

struct MembershipResult {
  bool member = false;
  double residual = 0.0;
};

/// Degree-n membership test by reduction against the spanning set.
inline MembershipResult membership(const AlgebraPresentation& alg, const Polynomial& f, int n,
                                   double tol = 1e-9) {
  require(f.dim() == alg.d, "membership: polynomial dimension mismatch");
  if (f.degree() > n) return {false, std::numeric_limits<double>::infinity()};
  const auto span = detail::build_spanning(alg, n, kDefaultProductCap);
  const Vector v = to_vector(span.space, f);
  const Vector r = span.echelon.reduce(v);
  MembershipResult out;
  out.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  out.member = out.residual <= tol * std::max(1.0, v.cwiseAbs().maxCoeff());
  return out;
}

struct PointPartition {
  std::vector<std::vector<int>> blocks;

  int block_of(int i) const {
    for (std::size_t k = 0; k < blocks.size(); ++k)
      for (int j : blocks[k])
        if (j == i) return static_cast<int>(k);
    return -1;
  }
  std::size_t size() const { return blocks.size(); }
};

/// Degree-n equivalence: x_i ~ x_j when every spanning element agrees at both points.
inline PointPartition point_equivalence(const AlgebraPresentation& alg, const std::vector<Point>& points, int n,
                                        double tol = tol::kEquivalence) {
  require(!points.empty(), "point_equivalence: need at least one point");
  for (const auto& x : points) require(x.size() == alg.d, "point_equivalence: point dimension mismatch");
  const auto elems = spanning_monomials(alg, n);
  std::vector<std::vector<cplx>> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (const auto& e : elems) values[i].push_back(e.eval(points[i]));

  std::vector<int> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      bool same = true;
      for (std::size_t k = 0; k < elems.size() && same; ++k)
        same = std::abs(values[i][k] - values[j][k]) <= tol * std::max(1.0, std::abs(values[i][k]));
      if (same) {
        const int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  PointPartition out;
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int root = find(static_cast<int>(i));
    auto [it, fresh] = slot.emplace(root, out.blocks.size());
    if (fresh) out.blocks.emplace_back();
    out.blocks[it->second].push_back(static_cast<int>(i));
  }
  return out;
}

namespace detail {

/// Snaps the constant terms of all parts onto a common power-of-two grid so the
/// left fold of the constants is exact, then sets the last constant to 1 minus that fold.
inline void fix_constant(std::vector<Polynomial>& parts, Polynomial& last, int d) {
  const MultiIndex zero(d, 0);
  double mass = 1.0 + std::abs(last.coefficient(zero).real());
  for (const auto& p : parts) mass += std::abs(p.coefficient(zero).real());
  const double q = std::ldexp(1.0, std::ilogb(mass) + 1 - std::numeric_limits<double>::digits);
  auto replace_constant = [&](Polynomial& p, double re) {
    const double im = p.coefficient(zero).imag();
    Polynomial rebuilt(d);
    for (const auto& [a, v] : p.terms())
      if (a != zero) rebuilt.add_term(a, v);
    rebuilt.add_term(zero, cplx(re, im));
    p = rebuilt;
  };
  double s = 0.0;
  for (auto& p : parts) {
    const double snapped = std::round(p.coefficient(zero).real() / q) * q;
    replace_constant(p, snapped);
    s += snapped;
  }
  replace_constant(last, 1.0 - s);
}

/// Minimum-norm combination of spanning elements taking the values b on the
/// rows, using the lowest degree at which the system is consistent.
inline std::optional<Polynomial> lowest_degree_fit(const std::vector<Polynomial>& elems,
                                                   const std::vector<Point>& points, const std::vector<int>& rows,
                                                   const Vector& b, int n, double& residual) {
  residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    std::vector<std::size_t> use;
    for (std::size_t s = 0; s < elems.size(); ++s)
      if (elems[s].degree() <= k) use.push_back(s);
    Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(use.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t s = 0; s < use.size(); ++s) a(r, s) = elems[use[s]].eval(points.at(rows[r]));
    const Vector c = linalg::min_norm_solve(a, b);
    residual = (a * c - b).cwiseAbs().maxCoeff();
    if (residual <= tol::kPartition) {
      Polynomial f(elems.front().dim());
      for (std::size_t s = 0; s < use.size(); ++s) f += elems[use[s]] * c(static_cast<Eigen::Index>(s));
      return f;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Elements e_1..e_p of the algebra with sum exactly 1 and e_k = 1 on block k, 0 on the others.
inline std::vector<Polynomial> partition_of_unity(const AlgebraPresentation& alg, const std::vector<Point>& points,
                                                  const PointPartition& partition, int n) {
  const std::size_t p = partition.size();
  require(p >= 1, "partition_of_unity: empty partition");
  if (p == 1) return {Polynomial::constant(alg.d, 1.0)};
  const auto elems = spanning_monomials(alg, n);
  std::vector<Polynomial> e;
  for (std::size_t k = 0; k + 1 < p; ++k) {
    Polynomial ek = Polynomial::constant(alg.d, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
      if (j == k) continue;
      std::vector<int> rows = partition.blocks[k];
      rows.insert(rows.end(), partition.blocks[j].begin(), partition.blocks[j].end());
      Vector b(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) b(r) = r < partition.blocks[k].size() ? 1.0 : 0.0;
      double residual = 0.0;
      const auto f = detail::lowest_degree_fit(elems, points, rows, b, n, residual);
      if (!f) {
        std::ostringstream msg;
        msg << "algebra cannot separate blocks " << k << " and " << j << " at degree " << n
            << " (residual " << residual << ")";
        throw InfeasibleError(msg.str(), residual);
      }
      ek = ek * *f;
    }
    e.push_back(std::move(ek));
  }
  Polynomial last = Polynomial::constant(alg.d, 1.0) - sum_polynomials(alg.d, e);
  detail::fix_constant(e, last, alg.d);
  e.push_back(std::move(last));
  return e;
}

/// Orthonormal basis of span{ s h truncated to degree N : s in the spanning set }.
inline SubspaceBasis cyclic_subspace(const TruncatedSpace& space, const AlgebraPresentation& alg, const Polynomial& h) {
  require(h.dim() == space.d && alg.d == space.d, "cyclic_subspace: dimension mismatch");
  require(!h.is_zero(), "cyclic_subspace: h must be nonzero");
  require(h.degree() <= space.max_degree, "cyclic_subspace: deg h exceeds the truncation degree");
  const auto elems = spanning_monomials(alg, space.max_degree);
  Matrix family(space.size(), static_cast<Eigen::Index>(elems.size()));
  for (std::size_t s = 0; s < elems.size(); ++s)
    family.col(static_cast<Eigen::Index>(s)) = to_vector(space, (elems[s] * h).truncated(space.max_degree));
  return orthonormalize(space, family);
}

/// Compressed kernel [<P_L k_{x_j}, k_{x_i}>] in the truncated space.
inline Matrix compressed_kernel(const TruncatedSpace& space, const SubspaceBasis& basis,
                                const std::vector<Point>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix v;
  if (basis.full) {
    v.resize(n, space.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      check_point(space, points[i]);
      v.row(i) = (monomial_values(space, points[i]).array() * space.multinomials.cwiseSqrt().cast<cplx>().array())
                     .matrix()
                     .transpose();
    }
  } else {
    v.resize(n, basis.rank());
    for (Eigen::Index i = 0; i < n; ++i) {
      check_point(space, points[i]);
      v.row(i) = monomial_values(space, points[i]).transpose() * basis.columns;
    }
  }
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx kij = v.row(j).dot(v.row(i));
      k(i, j) = kij;
      k(j, i) = std::conj(kij);
    }
    k(i, i) = cplx(k(i, i).real(), 0.0);
  }
  return k;
}

enum class FamilyVariant { FullSpace, RandomCyclic, ExplicitVectors, FiniteCodimGrid };

inline std::string family_variant_name(FamilyVariant v) {
  switch (v) {
    case FamilyVariant::FullSpace: return "full_space";
    case FamilyVariant::RandomCyclic: return "random_cyclic";
    case FamilyVariant::ExplicitVectors: return "explicit_vectors";
    case FamilyVariant::FiniteCodimGrid: return "finite_codim_grid";
  }
  return "unknown";
}

inline FamilyVariant parse_family_variant(const std::string& s) {
  if (s == "full_space") return FamilyVariant::FullSpace;
  if (s == "random_cyclic") return FamilyVariant::RandomCyclic;
  if (s == "explicit_vectors") return FamilyVariant::ExplicitVectors;
  if (s == "finite_codim_grid") return FamilyVariant::FiniteCodimGrid;
  throw InputError("unknown family variant '" + s + "'");
}

struct SubspaceFamilySpec {
  FamilyVariant variant = FamilyVariant::FullSpace;
  int count = 1;
  std::uint64_t seed = 0;
  double scale = 0.1;
  std::vector<Polynomial> vectors;
  std::vector<Polynomial> complement;
  int resolution = 1;

  static SubspaceFamilySpec full_space() { return {}; }
  static SubspaceFamilySpec random_cyclic(int count, std::uint64_t seed, double scale) {
    SubspaceFamilySpec s;
    s.variant = FamilyVariant::RandomCyclic;
    s.count = count;
    s.seed = seed;
    s.scale = scale;
    return s;
  }
  static SubspaceFamilySpec explicit_vectors(std::vector<Polynomial> hs) {
    SubspaceFamilySpec s;
    s.variant = FamilyVariant::ExplicitVectors;
    s.vectors = std::move(hs);
    return s;
  }
  static SubspaceFamilySpec finite_codim_grid(std::vector<Polynomial> basis, int resolution) {
    SubspaceFamilySpec s;
    s.variant = FamilyVariant::FiniteCodimGrid;
    s.complement = std::move(basis);
    s.resolution = resolution;
    return s;
  }

  void validate() const {
    switch (variant) {
      case FamilyVariant::FullSpace: break;
      case FamilyVariant::RandomCyclic:
        require(count >= 1, "family: count must be positive");
        require(std::isfinite(scale) && scale >= 0.0, "family: scale must be finite and non-negative");
        break;
      case FamilyVariant::ExplicitVectors: require(!vectors.empty(), "family: vector list is empty"); break;
      case FamilyVariant::FiniteCodimGrid:
        require(!complement.empty(), "family: complement basis is empty");
        require(complement.size() <= 4, "family: complement basis longer than 4");
        require(resolution >= 1, "family: resolution must be >= 1");
        break;
    }
  }
};

inline constexpr double kMaxGridPoints = 1e6;

/// Deterministic grid on the unit sphere of C^p: resolution^(2p-1) points in
/// hyperspherical coordinates (polar angles k pi / R, azimuth 2 pi k / R).
inline std::vector<std::vector<cplx>> sphere_grid(int p, int resolution) {
  require(p >= 1, "sphere_grid: p must be >= 1");
  require(resolution >= 1, "sphere_grid: resolution must be >= 1");
  const int angles = 2 * p - 1;
  if (std::pow(double(resolution), angles) > kMaxGridPoints) {
    std::ostringstream msg;
    msg << "sphere_grid: " << resolution << "^" << angles << " points exceeds the guard";
    throw ResourceError(msg.str());
  }
  const double pi = std::acos(-1.0);
  std::vector<std::vector<cplx>> out;
  std::vector<int> idx(angles, 0);
  while (true) {
    std::vector<double> x(2 * p);
    double sin_prod = 1.0;
    for (int a = 0; a < angles; ++a) {
      const bool azimuth = a == angles - 1;
      const double phi = azimuth ? 2.0 * pi * idx[a] / resolution : pi * idx[a] / resolution;
      x[a] = sin_prod * std::cos(phi);
      sin_prod *= std::sin(phi);
    }
    x[2 * p - 1] = sin_prod;
    std::vector<cplx> pt(p);
    for (int k = 0; k < p; ++k) pt[k] = cplx(x[2 * k], x[2 * k + 1]);
    out.push_back(std::move(pt));
    int a = angles - 1;
    while (a >= 0 && ++idx[a] == resolution) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

struct FamilyMember {
  std::string label;
  SubspaceBasis basis;
  std::optional<Polynomial> h;
  std::vector<cplx> grid_point;
  bool heuristic = false;
};

inline std::vector<FamilyMember> sample_family(const TruncatedSpace& space, const AlgebraPresentation& alg,
                                               const SubspaceFamilySpec& spec) {
  spec.validate();
  std::vector<FamilyMember> out;
  switch (spec.variant) {
    case FamilyVariant::FullSpace: {
      FamilyMember m;
      m.label = "full_space";
      m.basis = SubspaceBasis::full_space(space);
      out.push_back(std::move(m));
      break;
    }
    case FamilyVariant::RandomCyclic: {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      const auto low = make_space(space.d, std::min(2, space.max_degree));
      for (int c = 0; c < spec.count; ++c) {
        Polynomial q(space.d);
        for (const auto& a : low.monomials) {
          const double re = unif(rng);
          const double im = unif(rng);
          q.add_term(a, cplx(re, im));
        }
        Polynomial h = Polynomial::constant(space.d, 1.0) + q * cplx(spec.scale, 0.0);
        FamilyMember m;
        m.label = "random_cyclic[" + std::to_string(c) + "] (heuristic cyclic sample)";
        m.basis = cyclic_subspace(space, alg, h);
        m.h = std::move(h);
        m.heuristic = true;
        out.push_back(std::move(m));
      }
      break;
    }
    case FamilyVariant::ExplicitVectors: {
      for (std::size_t c = 0; c < spec.vectors.size(); ++c) {
        FamilyMember m;
        m.label = "explicit[" + std::to_string(c) + "]";
        m.basis = cyclic_subspace(space, alg, spec.vectors[c]);
        m.h = spec.vectors[c];
        out.push_back(std::move(m));
      }
      break;
    }
    case FamilyVariant::FiniteCodimGrid: {
      const auto grid = sphere_grid(static_cast<int>(spec.complement.size()), spec.resolution);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        Polynomial h(space.d);
        for (std::size_t k = 0; k < grid[g].size(); ++k) h += spec.complement[k] * grid[g][k];
        if (h.is_zero()) throw InputError("family: complement basis gives h = 0 at a grid point");
        FamilyMember m;
        m.label = "grid[" + std::to_string(g) + "]";
        m.basis = cyclic_subspace(space, alg, h);
        m.h = std::move(h);
        m.grid_point = grid[g];
        out.push_back(std::move(m));
      }
      break;
    }
  }
  return out;
}

}  // namespace nevpick

#endif  // NEVPICK_ALGEBRAS_HPP
