#include "spdcone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace spdcone {

namespace {

Matrix spectral_power(const Eigensystem& es, double t) {
  return spectral_apply(es, [t](double v) { return std::pow(v, t); });
}

// c x c on materializations, with the scalar coordinate carried separately.
UnitizedHermitian sandwich(const Matrix& c, double c_scalar, const UnitizedHermitian& x) {
  const double s = c_scalar * c_scalar * x.scalar();
  Matrix m = c * x.materialize() * c;
  m.diagonal().array() -= s;
  return UnitizedHermitian::hermitian_part_of(s, m);
}

}  // namespace

UnitizedHermitian whiten(const ConePoint& p, const UnitizedHermitian& x) {
  check_same_dim(p.dim(), x.dim(), "whiten");
  return sandwich(spectral_power(p.eig(), -0.5), 1.0 / std::sqrt(p.scalar()), x);
}

UnitizedHermitian color(const ConePoint& p, const UnitizedHermitian& x) {
  check_same_dim(p.dim(), x.dim(), "color");
  return sandwich(spectral_power(p.eig(), 0.5), std::sqrt(p.scalar()), x);
}

double metric_at(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y) {
  return hs_inner(whiten(p, x), whiten(p, y));
}

double norm_at(const ConePoint& p, const UnitizedHermitian& x) { return hs_norm(whiten(p, x)); }

ConePoint exp_point(const ConePoint& p, const UnitizedHermitian& v) {
  return ConePoint(color(p, mat_exp(whiten(p, v)).op()));
}

UnitizedHermitian log_point(const ConePoint& p, const ConePoint& q) {
  check_same_dim(p.dim(), q.dim(), "log_point");
  return color(p, mat_log(ConePoint(whiten(p, q.op()))));
}

ConePoint geodesic_eval(const ConePoint& p, const ConePoint& q, double t) {
  check_same_dim(p.dim(), q.dim(), "geodesic_eval");
  if (t == 0.0) return p;
  const ConePoint r(whiten(p, q.op()));
  return ConePoint(color(p, mat_pow(r, t).op()));
}

UnitizedHermitian geodesic_velocity(const ConePoint& p, const ConePoint& q, double t) {
  check_same_dim(p.dim(), q.dim(), "geodesic_velocity");
  const ConePoint r(whiten(p, q.op()));
  // r^t and ln r commute, so their product is the spectral function v^t ln v.
  return color(p, spd_apply(r, [t](double v) { return std::pow(v, t) * std::log(v); }));
}

Geodesic::Geodesic(ConePoint p, UnitizedHermitian v)
    : p_(std::move(p)),
      v_(std::move(v)),
      whitened_(whiten(p_, v_)),
      whitened_eig_(eig_hermitian(whitened_.materialize())) {}

Geodesic Geodesic::through(const ConePoint& p, const ConePoint& q) { return Geodesic(p, log_point(p, q)); }

ConePoint Geodesic::at(double t) const {
  const double ws = whitened_.scalar();
  Eigensystem es;
  es.values = (t * whitened_eig_.values).array().exp();
  es.vectors = whitened_eig_.vectors;
  const ConePoint e = ConePoint::from_spectral(std::exp(t * ws), std::move(es));
  return ConePoint(color(p_, e.op()));
}

UnitizedHermitian Geodesic::velocity_at(double t) const {
  const double ws = whitened_.scalar();
  const Matrix m = spectral_apply(whitened_eig_, [t](double v) { return v * std::exp(t * v); });
  const double s = ws * std::exp(t * ws);
  Matrix hs = m;
  hs.diagonal().array() -= s;
  return color(p_, UnitizedHermitian::hermitian_part_of(s, hs));
}

double Geodesic::speed() const { return hs_norm(whitened_); }

double distance(const ConePoint& p, const ConePoint& q) {
  check_same_dim(p.dim(), q.dim(), "distance");
  return hs_norm(mat_log(ConePoint(whiten(p, q.op()))));
}

UnitizedHermitian parallel_transport(const ConePoint& p, const ConePoint& q, const UnitizedHermitian& w) {
  check_same_dim(p.dim(), q.dim(), "parallel_transport");
  check_same_dim(p.dim(), w.dim(), "parallel_transport");
  const ConePoint r(whiten(p, q.op()));
  const UnitizedOperator sqrt_p(mat_sqrt(p).op());
  const UnitizedOperator inv_sqrt_p(mat_pow(p, -0.5).op());
  const UnitizedOperator mid(mat_sqrt(r).op());
  const UnitizedOperator m = sqrt_p * mid * inv_sqrt_p;
  return congruence(m, w);
}

UnitizedHermitian curvature(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y,
                            const UnitizedHermitian& z) {
  // p[[p^{-1}x, p^{-1}y], p^{-1}z] = p^{1/2} [[xw, yw], zw] p^{1/2} with
  // xw = p^{-1/2} x p^{-1/2} etc.
  const UnitizedOperator xw(whiten(p, x));
  const UnitizedOperator yw(whiten(p, y));
  const UnitizedOperator zw(whiten(p, z));
  const UnitizedHermitian inner = commutator(commutator(xw, yw), zw).hermitian();
  return -0.25 * color(p, inner);
}

double sectional_unnormalized(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y) {
  return metric_at(p, curvature(p, x, y, y), x);
}

double sectional(const ConePoint& p, const UnitizedHermitian& x, const UnitizedHermitian& y) {
  const double xx = metric_at(p, x, x);
  const double yy = metric_at(p, y, y);
  const double xy = metric_at(p, x, y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 > 1e-12 * xx * yy) || xx == 0.0 || yy == 0.0)
    throw DegenerateError("sectional: vectors are linearly dependent");
  return sectional_unnormalized(p, x, y) / area2;
}

ConePoint symmetry(const ConePoint& p, const ConePoint& q) {
  check_same_dim(p.dim(), q.dim(), "symmetry");
  return ConePoint(congruence(p.op(), mat_inv(q).op()));
}

ConePoint transvection(const ConePoint& p, const ConePoint& q, double t, const ConePoint& r) {
  if (t == 0.0) return r;
  const ConePoint mid = geodesic_eval(p, q, 0.5 * t);
  return symmetry(mid, symmetry(p, r));
}

UnitizedHermitian covariant_derivative(std::span<const ConePoint> curve, std::span<const UnitizedHermitian> field,
                                       double h, std::size_t i) {
  if (curve.size() != field.size()) throw DimensionError("covariant_derivative: curve and field lengths differ");
  if (i == 0 || i + 1 >= curve.size())
    throw IndexError("covariant_derivative: index " + std::to_string(i) + " is on the boundary");
  const double inv2h = 0.5 / h;
  const UnitizedHermitian ydot = inv2h * (field[i + 1] - field[i - 1]);
  const UnitizedHermitian gdot = inv2h * (curve[i + 1].op() - curve[i - 1].op());
  const UnitizedOperator a = UnitizedOperator(gdot) * UnitizedOperator(mat_inv(curve[i]).op()) *
                             UnitizedOperator(field[i]);
  // gdot g^{-1} Y + Y g^{-1} gdot = a + a*.
  const UnitizedHermitian sym = (a + adjoint(a)).hermitian();
  return ydot - 0.5 * sym;
}

UnitizedHermitian jacobi_field(const ConePoint& p, const UnitizedHermitian& v, const UnitizedHermitian& w,
                               double t) {
  return color(p, frechet_exp(t * whiten(p, v), t * whiten(p, w)));
}

double angle_at(const ConePoint& p, const ConePoint& q, const ConePoint& r) {
  const UnitizedHermitian u = whiten(p, log_point(p, q));
  const UnitizedHermitian w = whiten(p, log_point(p, r));
  const double nu = hs_norm(u);
  const double nw = hs_norm(w);
  if (nu == 0.0 || nw == 0.0) throw DegenerateError("angle_at: degenerate triangle");
  return std::acos(std::clamp(hs_inner(u, w) / (nu * nw), -1.0, 1.0));
}

double simpson(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0) throw DomainError("simpson: need an odd number of at least 3 samples");
  const double h = 1.0 / static_cast<double>(n - 1);
  double s = samples.front() + samples.back();
  for (std::size_t k = 1; k + 1 < n; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * samples[k];
  return s * h / 3.0;
}

double piecewise_geodesic_length(std::span<const ConePoint> waypoints, int nodes) {
  if (waypoints.size() < 2) return 0.0;
  double total = 0.0;
  std::vector<double> speed(static_cast<std::size_t>(nodes));
  for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
    const Geodesic g = Geodesic::through(waypoints[seg], waypoints[seg + 1]);
    for (int k = 0; k < nodes; ++k) {
      const double t = static_cast<double>(k) / (nodes - 1);
      speed[static_cast<std::size_t>(k)] = norm_at(g.at(t), g.velocity_at(t));
    }
    total += simpson(speed);
  }
  return total;
}

}  // namespace spdcone
