#pragma once

// Riemannian geometry of the positive cone with the affine-invariant trace
// metric <x, y>_p = <p^{-1/2} x p^{-1/2}, p^{-1/2} y p^{-1/2}>_2.

#include <span>
#include <vector>

#include "spdcone/opalg.hpp"

namespace spdcone {

double metric_at(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y);
double norm_at(const ConePoint& p, const UnitizedHermitian& x);

/// p^{-1/2} x p^{-1/2}: pulls a tangent vector at p back to the identity.
UnitizedHermitian whiten(const ConePoint& p, const UnitizedHermitian& x);
/// p^{1/2} x p^{1/2}: pushes a tangent vector at the identity to p.
UnitizedHermitian color(const ConePoint& p, const UnitizedHermitian& x);

/// Exp_p(v) = p^{1/2} exp(p^{-1/2} v p^{-1/2}) p^{1/2}.
ConePoint exp_point(const ConePoint& p, const UnitizedHermitian& v);
/// Exp_p^{-1}(q) = p^{1/2} ln(p^{-1/2} q p^{-1/2}) p^{1/2}.
UnitizedHermitian log_point(const ConePoint& p, const ConePoint& q);

/// gamma_pq(t) = p^{1/2} (p^{-1/2} q p^{-1/2})^t p^{1/2}.
ConePoint geodesic_eval(const ConePoint& p, const ConePoint& q, double t);
/// Exact velocity of gamma_pq at t.
UnitizedHermitian geodesic_velocity(const ConePoint& p, const ConePoint& q, double t);

/// Geodesic through p with initial velocity v.
class Geodesic {
 public:
  Geodesic(ConePoint p, UnitizedHermitian v);
  /// The geodesic from p to q, parametrized on [0, 1].
  static Geodesic through(const ConePoint& p, const ConePoint& q);

  const ConePoint& start() const { return p_; }
  const UnitizedHermitian& velocity() const { return v_; }

  ConePoint at(double t) const;
  UnitizedHermitian velocity_at(double t) const;
  /// Constant speed |v|_p.
  double speed() const;

 private:
  ConePoint p_;
  UnitizedHermitian v_;
  UnitizedHermitian whitened_;  // p^{-1/2} v p^{-1/2}
  Eigensystem whitened_eig_;
};

/// |ln(p^{-1/2} q p^{-1/2})|_2.
double distance(const ConePoint& p, const ConePoint& q);

/// Parallel translation of w from T_p to T_q along gamma_pq.
UnitizedHermitian parallel_transport(const ConePoint& p, const ConePoint& q, const UnitizedHermitian& w);

/// R_p(x, y)z = -1/4 p [[p^{-1}x, p^{-1}y], p^{-1}z].
UnitizedHermitian curvature(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y,
                            const UnitizedHermitian& z);

/// <R_p(x, y)y, x>_p.
double sectional_unnormalized(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y);
/// Sectional curvature of span{x, y}. Throws DegenerateError for dependent
/// x, y.
double sectional(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y);

/// s_p(q) = p q^{-1} p.
ConePoint symmetry(const ConePoint& p, const ConePoint& q);

/// s_{gamma(t/2)} o s_p applied to r, gamma the geodesic from p to q.
ConePoint transvection(const ConePoint& p, const ConePoint& q, double t, const ConePoint& r);

/// Covariant derivative of a field Y sampled along a curve with uniform
/// spacing h, at interior sample i, by central differences.
UnitizedHermitian covariant_derivative(std::span<const ConePoint> curve, std::span<const UnitizedHermitian> field,
                                       double h, std::size_t i);

/// J(t) = d/ds Exp_p(t (v + s w)) at s = 0.
UnitizedHermitian jacobi_field(const ConePoint& p, const UnitizedHermitian& v, const UnitizedHermitian& w, double t);

/// Angle at p between the geodesics to q and r.
double angle_at(const ConePoint& p, const ConePoint& q, const ConePoint& r);

/// Composite Simpson rule with `nodes` (odd) samples on [0, 1].
double simpson(std::span<const double> samples);

/// Length of the piecewise geodesic through the waypoints, integrating
/// |alpha'(t)| with the exact geodesic velocity on each segment.
double piecewise_geodesic_length(std::span<const ConePoint> waypoints, int nodes = 101);

}  // namespace spdcone
