#include "spdcone/project.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spdcone {

namespace {

// Everything below works at the current iterate q in whitened coordinates:
// L = log(q^{-1/2} p q^{-1/2}) so that Log_q(p) = q^{1/2} L q^{1/2} and
// norm_at(q, Log_q p) = |L|_2.
struct Whitened {
  UnitizedHermitian log;
  UnitizedHermitian tangential;
  double f = 0.0;
  double grad = 0.0;
};

Whitened evaluate(const TripleSystem& m, const ConePoint& q, const ConePoint& p) {
  Whitened w;
  w.log = mat_log(ConePoint(whiten(q, p.op())));
  w.tangential = m.project(w.log);
  const double d = hs_norm(w.log);
  w.f = 0.5 * d * d;
  w.grad = hs_norm(w.tangential);
  return w;
}

void check_conditioning(const ConePoint& p, const char* where) {
  const double c = p.condition_number();
  if (!(c <= kMaxCondition))
    throw DomainError(std::string(where) + ": condition number " + std::to_string(c) + " exceeds 1e8");
}

}  // namespace

Matrix expm_hermitian(const Matrix& h) {
  return spectral_apply(eig_hermitian(h), [](double v) { return std::exp(v); });
}

ConePoint snap_to(const TripleSystem& m, const ConePoint& q) { return mat_exp(m.project(mat_log(q))); }

ProjectionResult project(const TripleSystem& m, const ConePoint& p, const ProjectionOptions& opts) {
  check_same_dim(m.n(), p.dim(), "project");
  check_conditioning(p, "project");
  if (opts.max_iter < 0 || !(opts.tol > 0.0) || !(opts.shrink > 0.0 && opts.shrink < 1.0) ||
      !(opts.initial_step > 0.0))
    throw DomainError("project: invalid options");

  ConePoint q = opts.start ? snap_to(m, *opts.start) : mat_exp(m.project(mat_log(p)));
  const double threshold = opts.tol * (1.0 + distance(q, p));

  Whitened cur = evaluate(m, q, p);
  double best_grad = cur.grad;
  UnitizedHermitian best = q.op();
  int iter = 0;
  while (cur.grad > threshold) {
    if (iter >= opts.max_iter)
      throw ConvergenceError("project: no convergence after " + std::to_string(iter) + " iterations", best.scalar(),
                             best.hs(), best_grad, iter);
    // f is geodesically convex with Hessian >= 1 on M, so a unit step can
    // only overshoot. The first trial step is refined by a secant step on
    // the directional derivative phi'(tau) = -<Log_q'(p), transported
    // direction>, after which plain Armijo backtracking takes over.
    //
    // Near the minimum the decrease in f drops below the roundoff of f
    // itself; there the approximate Armijo test of Hager and Zhang compares
    // slopes instead: phi'(tau) <= (2c - 1) phi'(0).
    const double g2 = cur.grad * cur.grad;
    const double noise = 1e-10 * (1.0 + cur.f);
    const UnitizedHermitian step_dir = color(q, cur.tangential);
    struct Trial {
      ConePoint point;
      Whitened w;
    };
    auto try_step = [&](double tau) {
      ConePoint cand = snap_to(m, ConePoint(color(q, mat_exp(tau * cur.tangential).op())));
      Whitened next = evaluate(m, cand, p);
      return Trial{std::move(cand), std::move(next)};
    };
    auto slope_at = [&](const Trial& t) {
      return -hs_inner(t.w.log, whiten(t.point, parallel_transport(q, t.point, step_dir)));
    };
    auto acceptable = [&](const Trial& t, double tau) {
      if (t.w.f <= cur.f - opts.armijo_c * tau * g2) return true;
      return std::abs(t.w.f - cur.f) <= noise && slope_at(t) <= (1.0 - 2.0 * opts.armijo_c) * g2;
    };

    double tau = opts.initial_step;
    std::optional<Trial> taken;
    Trial first = try_step(tau);
    const double curvature = (slope_at(first) + g2) / tau;
    if (curvature > 0.0 && g2 / curvature < 0.999 * tau) {
      const double ts = g2 / curvature;
      Trial sec = try_step(ts);
      if (acceptable(sec, ts)) taken.emplace(std::move(sec));
    }
    if (!taken && acceptable(first, tau)) taken.emplace(std::move(first));
    while (!taken && tau > 1e-16) {
      tau *= opts.shrink;
      Trial t = try_step(tau);
      if (acceptable(t, tau)) taken.emplace(std::move(t));
    }
    const bool accepted = taken.has_value();
    if (accepted) {
      q = std::move(taken->point);
      cur = std::move(taken->w);
    }
    ++iter;
    if (!accepted)
      throw ConvergenceError("project: line search failed", best.scalar(), best.hs(), best_grad, iter);
    if (cur.grad < best_grad) {
      best_grad = cur.grad;
      best = q.op();
    }
  }
  UnitizedHermitian normal = color(q, cur.log - cur.tangential);
  return ProjectionResult{std::move(q), std::move(normal), iter, cur.grad};
}

MvmDecomposition decompose_mvm(const TripleSystem& m, const UnitizedHermitian& a, const ProjectionOptions& opts) {
  check_same_dim(m.n(), a.dim(), "decompose_mvm");
  const ConePoint ea = mat_exp(a);
  ProjectionResult pr = project(m, ea, opts);
  UnitizedHermitian x = 0.5 * mat_log(pr.foot);
  const ConePoint emx = mat_exp(-x);
  UnitizedHermitian v = mat_log(ConePoint(congruence(emx.op(), ea.op())));
  return MvmDecomposition{std::move(x), std::move(v), std::move(pr)};
}

RelativePolar polar_relative(const TripleSystem& m, const UnitizedOperator& g, const ProjectionOptions& opts) {
  check_same_dim(m.n(), g.dim(), "polar_relative");
  // inverse() raises SingularError for non-invertible g.
  (void)inverse(g);
  const ConePoint ggs(congruence(g, UnitizedHermitian::identity(g.dim())));
  const MvmDecomposition d = decompose_mvm(m, mat_log(ggs), opts);
  const UnitizedHermitian v = 0.5 * d.v;
  ConePoint ex = mat_exp(d.x);
  ConePoint ev = mat_exp(v);
  UnitizedOperator u = UnitizedOperator(mat_exp(-v).op()) * UnitizedOperator(mat_exp(-d.x).op()) * g;
  return RelativePolar{std::move(ex), std::move(ev), std::move(u)};
}

DiagDecomposition diag_decompose(const Matrix& a, double lambda, const ProjectionOptions& opts) {
  if (a.rows() != a.cols()) throw DimensionError("diag_decompose: matrix is not square");
  const Matrix h = hermitize_checked(a);
  const UnitizedHermitian pt = UnitizedHermitian::hermitian_part_of(lambda, h);
  if (!(lambda > 0.0)) throw DomainError("diag_decompose: lambda must be positive");
  const Eigensystem es = eig_hermitian(pt.materialize());
  if (!(es.values(0) > kPosTol * std::max(1.0, std::abs(es.values(es.values.size() - 1)))))
    throw DomainError("diag_decompose: lambda + a is not positive definite");
  const ConePoint p(pt);
  const int n = static_cast<int>(a.rows());
  ProjectionResult pr = project(TripleSystem::diagonal(n), p, opts);
  const Matrix fm = pr.foot.materialize();
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::sqrt(fm(i, i).real());
  Matrix w = whiten(pr.foot, pr.normal).materialize();
  const double fs = pr.foot.scalar();
  return DiagDecomposition{std::move(d), std::move(w), fs, std::move(pr)};
}

NormalCoords nm_coords(const TripleSystem& m, const ConePoint& p, const ProjectionOptions& opts) {
  ProjectionResult pr = project(m, p, opts);
  return NormalCoords{std::move(pr.foot), std::move(pr.normal)};
}

ConePoint e_map(const TripleSystem& m, const ConePoint& q, const UnitizedHermitian& v, double tol) {
  check_same_dim(m.n(), q.dim(), "e_map");
  check_same_dim(m.n(), v.dim(), "e_map");
  if (!contains_point(m, q)) throw DomainError("e_map: base point is not in the submanifold");
  const UnitizedHermitian vw = whiten(q, v);
  const double tangential = hs_norm(m.project(vw));
  if (tangential > tol * std::max(1.0, hs_norm(vw)))
    throw DomainError("e_map: vector is not normal to the submanifold (tangential part " +
                      std::to_string(tangential) + ")");
  return exp_point(q, v);
}

Matrix block_reconstruct(const Matrix& a, const Matrix& x, const Matrix& y) {
  const Eigen::Index k = a.rows();
  const Eigen::Index r = x.rows();
  if (a.cols() != k || x.cols() != r || y.rows() != r || y.cols() != k)
    throw DimensionError("block_reconstruct: inconsistent block shapes");
  const Eigensystem ea = eig_hermitian(hermitian_part(a));
  const Matrix half = spectral_apply(ea, [](double t) { return std::exp(0.5 * t); });
  const Matrix mhalf = spectral_apply(ea, [](double t) { return std::exp(-0.5 * t); });
  const Matrix ye = y * mhalf;
  Matrix inner = Matrix::Zero(k + r, k + r);
  inner.topRightCorner(k, r) = ye.adjoint();
  inner.bottomLeftCorner(r, k) = ye;
  inner.bottomRightCorner(r, r) = x;
  Matrix outer = Matrix::Identity(k + r, k + r);
  outer.topLeftCorner(k, k) = half;
  return outer * expm_hermitian(hermitian_part(inner)) * outer;
}

BlockDecomposition block_decompose(const Matrix& b, int k, const ProjectionOptions& opts) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw DimensionError("block_decompose: matrix is not square");
  if (k < 1 || k >= n) throw DomainError("block_decompose: need 1 <= k < n");
  const UnitizedHermitian bh(0.0, b);
  ProjectionResult pr = project(TripleSystem::block(n, k), mat_exp(bh), opts);
  const Matrix la = mat_log(pr.foot).materialize();
  const Matrix w = whiten(pr.foot, pr.normal).materialize();
  const Eigensystem ea = eig_hermitian(hermitian_part(la.topLeftCorner(k, k)));
  const Matrix half = spectral_apply(ea, [](double t) { return std::exp(0.5 * t); });
  BlockDecomposition out{hermitian_part(la.topLeftCorner(k, k)),
                         hermitian_part(w.bottomRightCorner(n - k, n - k)),
                         w.bottomLeftCorner(n - k, k) * half,
                         hs_norm(whiten(pr.foot, pr.normal)),
                         std::move(pr)};
  return out;
}

double block_distance_formula(const BlockDecomposition& d) {
  const Eigensystem ea = eig_hermitian(d.a);
  const Matrix mhalf = spectral_apply(ea, [](double t) { return std::exp(-0.5 * t); });
  const double ye = (d.y * mhalf).squaredNorm();
  return std::sqrt(kBlockDistY * ye + kBlockDistX * d.x.squaredNorm());
}

BlockPolar full_block_polar(const UnitizedOperator& g, int k, const ProjectionOptions& opts) {
  const int n = g.dim();
  if (k < 1 || k >= n) throw DomainError("full_block_polar: need 1 <= k < n");
  const RelativePolar rp = polar_relative(TripleSystem::block(n, k), g, opts);
  // The normal part splits as (scalar line) + (zero top-left block); the
  // scalar line contributes the factor lambda.
  const UnitizedHermitian v = mat_log(rp.ev);
  BlockPolar out;
  out.lambda = std::exp(v.scalar());
  out.r = rp.ex.materialize().topLeftCorner(k, k);
  Matrix vh = v.hs();
  vh.topLeftCorner(k, k).setZero();
  out.v = UnitizedHermitian::hermitian_part_of(0.0, vh);
  out.u = rp.u;
  return out;
}

UnitizedOperator block_polar_reconstruct(const BlockPolar& f) {
  const int n = f.v.dim();
  const Eigen::Index k = f.r.rows();
  Matrix r = Matrix::Identity(n, n);
  r.topLeftCorner(k, k) = f.r;
  const UnitizedOperator rr(1.0, r - Matrix::Identity(n, n));
  const UnitizedOperator ev(mat_exp(f.v).op());
  return Complex(f.lambda, 0.0) * (rr * ev * f.u);
}

}  // namespace spdcone
