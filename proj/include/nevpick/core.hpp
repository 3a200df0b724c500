#ifndef NEVPICK_CORE_HPP
#define NEVPICK_CORE_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nevpick {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

/// A point of the ambient domain (a coordinate vector in C^d).
using Point = Eigen::VectorXcd;

/// Numerical thresholds shared across modules. Every default used by the CLI
/// and the acceptance suite is pinned here.
namespace tol {
inline constexpr double kPsdRelative = 1e-9;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kCholeskyDrop = 1e-10;
inline constexpr double kGramSchmidtDrop = 1e-10;
inline constexpr double kEquivalence = 1e-10;
inline constexpr double kPartition = 1e-8;
inline constexpr double kPencilCondition = 1e-8;
inline constexpr double kBisection = 1e-10;
inline constexpr double kConstraintResidual = 1e-6;
inline constexpr double kContractivity = 1e-8;
inline constexpr double kDeltaSearch = 1e-6;
}  // namespace tol

//
// Error hierarchy. InfeasibleError and its subclasses are mathematical
// verdicts; everything else is an input, resource or numerical failure.
//

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double lambda_min)
      : Error(what), lambda_min_(lambda_min) {}
  double lambda_min() const { return lambda_min_; }

 private:
  double lambda_min_;
};

/// The normalized matrix G of a finite point set is not PSD.
class NotCompletePickError : public InfeasibleError {
 public:
  NotCompletePickError(const std::string& what, double lambda_min)
      : InfeasibleError(what, lambda_min) {}
};

/// No finite norm makes the Pick matrix PSD.
class UnboundedError : public InfeasibleError {
 public:
  explicit UnboundedError(const std::string& what)
      : InfeasibleError(what, -std::numeric_limits<double>::infinity()) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

/// Standard inner product <x, y> = sum_k x_k conj(y_k).
inline cplx inner(const Vector& x, const Vector& y) { return y.dot(x); }

}  // namespace nevpick

#endif  // NEVPICK_CORE_HPP
