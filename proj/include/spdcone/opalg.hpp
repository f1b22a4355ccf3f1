#pragma once

// Unitized Hermitian operator algebra at finite truncation.
//
// An element lambda*1 + a of the unitized Hilbert-Schmidt algebra is stored
// as the pair (scalar, hs). At finite n the split of scalar*I + hs is not
// unique, so the scalar coordinate is kept explicit and every operation acts
// on pairs. The map (scalar, hs) -> (scalar, scalar*I + hs) is an algebra
// isomorphism onto C x M_n; functions are applied with the rule
//   f(lambda + a) = f(lambda) + [f(lambda*I + a) - f(lambda)*I].

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "spdcone/errors.hpp"

namespace spdcone {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kPosTol = 1e-12;

/// Returns (m + m*)/2 if m is Hermitian within kHermTol relative to its
/// Frobenius norm; throws DomainError otherwise.
Matrix hermitize_checked(const Matrix& m);

/// (m + m*)/2 without a tolerance check. For results that are Hermitian in
/// exact arithmetic.
inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

/// lambda*1 + a with lambda real and a Hermitian: a tangent vector, or a
/// self-adjoint element of the unitized algebra.
class UnitizedHermitian {
 public:
  UnitizedHermitian() = default;

  /// Validates and symmetrizes hs.
  UnitizedHermitian(double scalar, const Matrix& hs);

  static UnitizedHermitian zero(int n);
  /// The unit element (1, 0).
  static UnitizedHermitian identity(int n);
  /// Pair whose materialization is `m`, with the given scalar coordinate.
  static UnitizedHermitian from_matrix(const Matrix& m, double scalar);
  /// Trusted constructor: symmetrizes without checking.
  static UnitizedHermitian hermitian_part_of(double scalar, const Matrix& hs);

  double scalar() const { return scalar_; }
  const Matrix& hs() const { return hs_; }
  int dim() const { return static_cast<int>(hs_.rows()); }

  /// scalar*I + hs.
  Matrix materialize() const;

  UnitizedHermitian& operator+=(const UnitizedHermitian& o);
  UnitizedHermitian& operator-=(const UnitizedHermitian& o);
  UnitizedHermitian& operator*=(double c);

  friend UnitizedHermitian operator+(UnitizedHermitian a, const UnitizedHermitian& b) { return a += b; }
  friend UnitizedHermitian operator-(UnitizedHermitian a, const UnitizedHermitian& b) { return a -= b; }
  friend UnitizedHermitian operator*(double c, UnitizedHermitian a) { return a *= c; }
  friend UnitizedHermitian operator*(UnitizedHermitian a, double c) { return a *= c; }
  friend UnitizedHermitian operator-(UnitizedHermitian a) { return a *= -1.0; }

 private:
  double scalar_ = 0.0;
  Matrix hs_;
};

/// mu*1 + g with mu complex and g an arbitrary complex matrix: group
/// elements, unitaries, commutators.
class UnitizedOperator {
 public:
  UnitizedOperator() = default;
  UnitizedOperator(Complex scalar, Matrix mat);
  /* implicit */ UnitizedOperator(const UnitizedHermitian& h);

  static UnitizedOperator identity(int n);
  /// Raw-matrix mode: wraps a plain matrix with scalar coordinate 1.
  static UnitizedOperator from_matrix(const Matrix& m, Complex scalar = 1.0);

  Complex scalar() const { return scalar_; }
  const Matrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  Matrix materialize() const;

  /// Hermitian part as a UnitizedHermitian (drops any anti-Hermitian part).
  UnitizedHermitian hermitian() const;

  UnitizedOperator& operator+=(const UnitizedOperator& o);
  UnitizedOperator& operator-=(const UnitizedOperator& o);
  UnitizedOperator& operator*=(Complex c);

  friend UnitizedOperator operator+(UnitizedOperator a, const UnitizedOperator& b) { return a += b; }
  friend UnitizedOperator operator-(UnitizedOperator a, const UnitizedOperator& b) { return a -= b; }
  friend UnitizedOperator operator*(Complex c, UnitizedOperator a) { return a *= c; }

 private:
  Complex scalar_ = 0.0;
  Matrix mat_;
};

/// (lambda + a)(beta + b) = lambda*beta + (lambda*b + beta*a + ab).
UnitizedOperator operator*(const UnitizedOperator& x, const UnitizedOperator& y);
UnitizedOperator adjoint(const UnitizedOperator& x);
/// Throws SingularError for a zero scalar or a singular materialization.
UnitizedOperator inverse(const UnitizedOperator& x);
/// xy - yx. The scalar coordinate of a commutator is always zero.
UnitizedOperator commutator(const UnitizedOperator& x, const UnitizedOperator& y);
/// c x c for Hermitian c, x; the result is Hermitian.
UnitizedHermitian congruence(const UnitizedHermitian& c, const UnitizedHermitian& x);
/// g x g* for arbitrary g.
UnitizedHermitian congruence(const UnitizedOperator& g, const UnitizedHermitian& x);

void check_same_dim(int a, int b, const char* where);

/// <x, y>_2 = x.scalar * y.scalar + 4 Re tr(x.hs y.hs).
double hs_inner(const UnitizedHermitian& x, const UnitizedHermitian& y);
double hs_norm(const UnitizedHermitian& x);
/// Complex form <x, y>_2 = x.scalar conj(y.scalar) + 4 tr(x.mat y.mat*).
Complex op_inner(const UnitizedOperator& x, const UnitizedOperator& y);
double op_norm(const UnitizedOperator& x);

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices. Throws
/// DomainError when `a` is not Hermitian within kHermTol.
Eigensystem eig_hermitian(const Matrix& a);

/// U diag(f(values)) U*.
Matrix spectral_apply(const Eigensystem& es, const std::function<double(double)>& f);

/// A UnitizedHermitian certified positive definite: both the scalar
/// coordinate and every eigenvalue of the materialization exceed kPosTol.
/// The eigendecomposition is computed once at construction.
class ConePoint {
 public:
  explicit ConePoint(const UnitizedHermitian& op);

  static ConePoint identity(int n);
  /// Builds a point from a known spectral decomposition of its
  /// materialization. Positivity is still checked.
  static ConePoint from_spectral(double scalar, Eigensystem es);

  const UnitizedHermitian& op() const { return op_; }
  const Eigensystem& eig() const { return eig_; }
  double scalar() const { return op_.scalar(); }
  const Matrix& hs() const { return op_.hs(); }
  int dim() const { return op_.dim(); }
  Matrix materialize() const { return op_.materialize(); }
  /// Ratio of extreme eigenvalues of the materialization.
  double condition_number() const;

  operator const UnitizedHermitian&() const { return op_; }

 private:
  ConePoint(UnitizedHermitian op, Eigensystem es);
  UnitizedHermitian op_;
  Eigensystem eig_;
};

/// f(lambda + a) by the scalar-part rule. Throws DomainError when f is not
/// finite on the spectrum or at the scalar coordinate.
UnitizedHermitian spd_apply(const ConePoint& p, const std::function<double(double)>& f);
/// Same rule for an arbitrary self-adjoint element.
UnitizedHermitian apply_function(const UnitizedHermitian& x, const std::function<double(double)>& f);

UnitizedHermitian mat_log(const ConePoint& p);
ConePoint mat_exp(const UnitizedHermitian& x);
ConePoint mat_pow(const ConePoint& p, double t);
ConePoint mat_sqrt(const ConePoint& p);
ConePoint mat_inv(const ConePoint& p);

/// Frechet derivative of exp at x applied to y, from the upper-right block
/// of exp([[X, Y], [0, X]]).
UnitizedHermitian frechet_exp(const UnitizedHermitian& x, const UnitizedHermitian& y);

/// g = |g| u with |g| = (g g*)^{1/2} and u unitary.
struct PolarFactors {
  ConePoint absval;
  UnitizedOperator unitary;
};
PolarFactors polar(const UnitizedOperator& g);

/// max(|u u* - 1|, |u* u - 1|) measured in op_norm.
double unitarity_defect(const UnitizedOperator& u);

}  // namespace spdcone
