#pragma once

// Lie triple systems m (real subspaces of self-adjoint elements closed under
// the double bracket) and the convex submanifolds M = exp(m) they generate.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spdcone/opalg.hpp"

namespace spdcone {

/// Real coordinates of x in which the Euclidean dot product is hs_inner.
RealVector hs_coordinates(const UnitizedHermitian& x);
/// Inverse of hs_coordinates.
UnitizedHermitian from_hs_coordinates(const RealVector& c, int n);

struct ClosureCheck {
  bool ok = false;
  double max_residual = 0.0;
};

/// Default residual tolerance for closure and span membership.
inline constexpr double kTripleTol = 1e-9;

class TripleSystem {
 public:
  /// Throws DegenerateError on dependent input and DomainError when the span
  /// is not closed under [[a, b], c] within `tol`.
  explicit TripleSystem(std::vector<UnitizedHermitian> basis, std::string kind = "custom", double tol = kTripleTol);

  /// Diagonal operators plus the scalar line.
  static TripleSystem diagonal(int n);
  /// The scalar line R*1.
  static TripleSystem scalar(int n);
  /// {x : [x, y] = 0}, including the scalar line.
  static TripleSystem commutant(const UnitizedHermitian& y);
  /// Hermitian operators supported on the top-left k x k block.
  static TripleSystem block(int n, int k);
  /// Real span of the scalar line and the powers a, a^2, ..., a^n.
  static TripleSystem polynomial(const UnitizedHermitian& a);
  /// Every self-adjoint element: the whole tangent space.
  static TripleSystem full(int n);

  const std::vector<UnitizedHermitian>& basis() const { return basis_; }
  const std::vector<UnitizedHermitian>& ortho_basis() const { return ortho_; }
  int dim() const { return static_cast<int>(ortho_.size()); }
  int n() const { return n_; }
  const std::string& kind() const { return kind_; }
  /// Block size for block systems, 0 otherwise.
  int block_size() const { return block_k_; }

  /// Orthogonal projection onto span(m) under hs_inner.
  UnitizedHermitian project(const UnitizedHermitian& x) const;
  /// hs_norm(x - project(x)).
  double span_residual(const UnitizedHermitian& x) const;
  /// Coefficients of project(x) in the orthonormal basis.
  RealVector coefficients(const UnitizedHermitian& x) const;
  UnitizedHermitian combine(const RealVector& coefficients) const;

 private:
  TripleSystem() = default;
  void orthonormalize();

  std::vector<UnitizedHermitian> basis_;
  std::vector<UnitizedHermitian> ortho_;
  Eigen::MatrixXd ortho_coords_;  // columns are hs_coordinates of ortho_
  std::string kind_;
  int n_ = 0;
  int block_k_ = 0;
};

/// Checks [[a, b], c] in span(vectors) for all triples of an orthonormalized
/// basis. Throws DegenerateError on dependent input.
ClosureCheck is_triple_system(std::span<const UnitizedHermitian> vectors, double tol = kTripleTol);

/// {p^{1/2} b p^{1/2} : b in basis}.
std::vector<UnitizedHermitian> tangent_basis_at(const TripleSystem& m, const ConePoint& p);

/// Orthogonal projection of w onto T_pM under the metric at p.
UnitizedHermitian project_tangent(const TripleSystem& m, const ConePoint& p, const UnitizedHermitian& w);

/// True iff log(p) lies in span(m) within tol.
bool contains_point(const TripleSystem& m, const ConePoint& p, double tol = 1e-7);
double membership_residual(const TripleSystem& m, const ConePoint& p);

/// g_M = m + [m, m].
struct BracketAlgebra {
  std::vector<UnitizedOperator> k_basis;  // skew-Hermitian, orthonormal under Re op_inner
  int g_dim = 0;
  double mm_in_k = 0.0;  // residual of [m, m] in k
  double mk_in_m = 0.0;  // residual of [m, k] in m
  double kk_in_k = 0.0;  // residual of [k, k] in k
  double max_residual() const;
};
BracketAlgebra bracket_algebra(const TripleSystem& m);

/// Max over random p, q in exp(m) of the span residual of log(q p q).
double qpq_closure_check(const TripleSystem& m, int trials, std::uint64_t seed = 1, double radius = 1.0);

}  // namespace spdcone
