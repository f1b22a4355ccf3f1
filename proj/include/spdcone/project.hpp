#pragma once

// Nearest-point projection onto exp(m) and the factorizations built on it.

#include <optional>

#include "spdcone/geometry.hpp"
#include "spdcone/triple.hpp"

namespace spdcone {

struct ProjectionOptions {
  double tol = 1e-10;
  int max_iter = 500;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  /// Overrides the linearized starting point exp(Proj_m(log p)).
  std::optional<ConePoint> start;
};

/// Points with a larger eigenvalue ratio are rejected before projecting.
inline constexpr double kMaxCondition = 1e8;

struct ProjectionResult {
  ConePoint foot;
  UnitizedHermitian normal;  // Exp_foot(normal) = p, normal orthogonal to T_foot M
  int iterations = 0;
  double residual = 0.0;  // final tangential gradient norm
};

/// Riemannian gradient descent on q -> dist(q, p)^2 / 2 over exp(m).
/// Throws ConvergenceError after max_iter steps.
ProjectionResult project(const TripleSystem& m, const ConePoint& p, const ProjectionOptions& opts = {});

/// exp(Proj_m(log q)): the nearest point of exp(m) in log coordinates.
ConePoint snap_to(const TripleSystem& m, const ConePoint& q);

struct MvmDecomposition {
  UnitizedHermitian x;  // in m
  UnitizedHermitian v;  // orthogonal to m
  ProjectionResult projection;
};
/// e^a = e^x e^v e^x.
MvmDecomposition decompose_mvm(const TripleSystem& m, const UnitizedHermitian& a, const ProjectionOptions& opts = {});

struct RelativePolar {
  ConePoint ex;
  ConePoint ev;
  UnitizedOperator u;
};
/// g = e^x e^v u with x in m, v orthogonal to m, u unitary.
RelativePolar polar_relative(const TripleSystem& m, const UnitizedOperator& g, const ProjectionOptions& opts = {});

struct DiagDecomposition {
  Matrix d;  // positive diagonal
  Matrix w;  // Hermitian, zero diagonal
  double foot_scalar = 0.0;
  ProjectionResult projection;
};
/// lambda + a = D e^w D. Needs lambda*I + a positive definite.
DiagDecomposition diag_decompose(const Matrix& a, double lambda, const ProjectionOptions& opts = {});

struct NormalCoords {
  ConePoint q;
  UnitizedHermitian v;
};
NormalCoords nm_coords(const TripleSystem& m, const ConePoint& p, const ProjectionOptions& opts = {});
/// Exp_q(v) for q in exp(m) and v normal to exp(m) at q; DomainError otherwise.
ConePoint e_map(const TripleSystem& m, const ConePoint& q, const UnitizedHermitian& v, double tol = 1e-8);

struct BlockDecomposition {
  Matrix a;  // k x k
  Matrix x;  // (n-k) x (n-k)
  Matrix y;  // (n-k) x k
  double distance = 0.0;  // dist(exp(block system), e^b)
  ProjectionResult projection;
};
/// e^b = diag(e^{A/2}, 1) exp([[0, e^{-A/2} Y*], [Y e^{-A/2}, X]]) diag(e^{A/2}, 1).
BlockDecomposition block_decompose(const Matrix& b, int k, const ProjectionOptions& opts = {});
Matrix block_reconstruct(const Matrix& a, const Matrix& x, const Matrix& y);
/// Constants in dist^2 = c1 |Y e^{-A/2}|_F^2 + c2 |X|_F^2 under the factor-4
/// inner product.
inline constexpr double kBlockDistY = 8.0;
inline constexpr double kBlockDistX = 4.0;
double block_distance_formula(const BlockDecomposition& d);

struct BlockPolar {
  double lambda = 1.0;
  Matrix r;             // k x k positive
  UnitizedHermitian v;  // zero scalar, zero top-left k x k block
  UnitizedOperator u;   // unitary
};
/// g = lambda diag(R, 1) e^v u.
BlockPolar full_block_polar(const UnitizedOperator& g, int k, const ProjectionOptions& opts = {});
UnitizedOperator block_polar_reconstruct(const BlockPolar& f);

/// exp of a Hermitian matrix.
Matrix expm_hermitian(const Matrix& h);

}  // namespace spdcone
