#ifndef NEVPICK_POLYNOMIAL_HPP
#define NEVPICK_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "nevpick/core.hpp"

namespace nevpick {

/// Exponent vector of a monomial z^alpha.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// Graded order: total degree first, then lexicographically *descending*
/// inside a degree, so that for d = 2 the sequence is 1, z1, z2, z1^2, z1 z2, z2^2, ...
struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

inline MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

inline std::string index_key(const MultiIndex& a) {
  std::string s;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(a[k]);
  }
  return s;
}

/// z^alpha evaluated at x.
inline cplx monomial_value(const MultiIndex& a, const Point& x) {
  cplx v(1.0, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (int p = 0; p < a[k]; ++p) v *= x(static_cast<Eigen::Index>(k));
  return v;
}

/// Sparse polynomial in d complex variables. Zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, cplx, GradedLess>;

  explicit Polynomial(int dim = 1) : dim_(dim) { require(dim >= 1, "polynomial dimension must be >= 1"); }

  static Polynomial constant(int dim, cplx c) {
    Polynomial p(dim);
    p.add_term(MultiIndex(dim, 0), c);
    return p;
  }
  static Polynomial monomial(const MultiIndex& a, cplx c = 1.0) {
    Polynomial p(static_cast<int>(a.size()));
    p.add_term(a, c);
    return p;
  }
  /// The coordinate function z_k (0-based k).
  static Polynomial coordinate(int dim, int k) {
    MultiIndex a(dim, 0);
    a.at(k) = 1;
    return monomial(a);
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

  cplx coefficient(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  void add_term(const MultiIndex& a, cplx c) {
    require(static_cast<int>(a.size()) == dim_, "monomial exponent length does not match dimension");
    for (int e : a) require(e >= 0, "monomial exponents must be non-negative");
    require(std::isfinite(c.real()) && std::isfinite(c.imag()), "polynomial coefficients must be finite");
    if (c == cplx(0.0)) return;
    auto [it, fresh] = terms_.emplace(a, c);
    if (!fresh) {
      it->second += c;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  /// Highest term in graded order.
  std::pair<MultiIndex, cplx> leading_term() const {
    require(!terms_.empty(), "leading term of the zero polynomial");
    return *terms_.rbegin();
  }

  cplx eval(const Point& x) const {
    require(x.size() == dim_, "evaluation point dimension mismatch");
    cplx v(0.0);
    for (const auto& [a, c] : terms_) v += c * monomial_value(a, x);
    return v;
  }

  /// Terms of total degree <= n.
  Polynomial truncated(int n) const {
    Polynomial p(dim_);
    for (const auto& [a, c] : terms_)
      if (total_degree(a) <= n) p.terms_.emplace(a, c);
    return p;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  Polynomial& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (it->second == cplx(0.0)) it = terms_.erase(it);
      else ++it;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b);
    Polynomial p(a.dim_);
    for (const auto& [x, cx] : a.terms_)
      for (const auto& [y, cy] : b.terms_) p.add_term(add_indices(x, y), cx * cy);
    return p;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0) continue;
        os << "*z" << (k + 1);
        if (a[k] > 1) os << "^" << a[k];
      }
    }
    return os.str();
  }

 private:
  void check_dim(const Polynomial& o) const {
    require(o.dim_ == dim_, "polynomial dimension mismatch");
  }

  int dim_;
  Terms terms_;
};

/// Left fold, term by term.
inline Polynomial sum_polynomials(int dim, const std::vector<Polynomial>& ps) {
  Polynomial s(dim);
  for (const auto& p : ps) s += p;
  return s;
}

}  // namespace nevpick

#endif  // NEVPICK_POLYNOMIAL_HPP
