#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spdcone/project.hpp"
#include "spdcone/random.hpp"

using namespace spdcone;

namespace {

const UnitizedHermitian s1(0.0, oracle::sigma1());

RandomModel model(int n) {
  RandomModel m;
  m.n = n;
  m.seed = 314;
  return m;
}

double odist(const ConePoint& a, const ConePoint& b) {
  return oracle::pair_distance(a.scalar(), a.materialize(), b.scalar(), b.materialize());
}

void check_result(const TripleSystem& m, const ConePoint& p, const ProjectionResult& r) {
  CHECK((exp_point(r.foot, r.normal).materialize() - p.materialize()).norm() <= 1e-7);
  for (const auto& b : tangent_basis_at(m, r.foot)) CHECK(std::abs(metric_at(r.foot, r.normal, b)) <= 1e-7);
  CHECK(contains_point(m, r.foot, 1e-7));
}

// Exact Hermitian matrix for diag(e^{A/2}, 1) exp([[0, e^{-A/2} Y*], [Y e^{-A/2}, X]]) diag(e^{A/2}, 1).
oracle::Matrix block_oracle(const oracle::Matrix& a, const oracle::Matrix& x, const oracle::Matrix& y) {
  const auto k = a.rows(), r = x.rows();
  const oracle::Matrix ha = oracle::expm_taylor(0.5 * a), hi = oracle::expm_taylor(-0.5 * a);
  oracle::Matrix inner = oracle::Matrix::Zero(k + r, k + r);
  inner.topRightCorner(k, r) = hi * y.adjoint();
  inner.bottomLeftCorner(r, k) = y * hi;
  inner.bottomRightCorner(r, r) = x;
  oracle::Matrix outer = oracle::Matrix::Identity(k + r, k + r);
  outer.topLeftCorner(k, k) = ha;
  return outer * oracle::expm_taylor(inner) * outer;
}

}  // namespace

TEST_CASE("points of the submanifold are fixed") {
  Sampler s(model(4), 0);
  const TripleSystem m = TripleSystem::block(4, 2);
  const ConePoint p = s.point_in(m, 1.5);
  const ProjectionResult r = project(m, p);
  CHECK(r.iterations <= 1);
  CHECK(hs_norm(r.normal) <= 1e-12);
  CHECK((r.foot.materialize() - p.materialize()).norm() <= 1e-12);
}

TEST_CASE("projection onto the scalar line") {
  Sampler s(model(3), 1);
  const UnitizedHermitian a = s.tangent(0.5);
  const ConePoint p(UnitizedHermitian(3.0, a.hs()));
  const ProjectionResult r = project(TripleSystem::scalar(3), p);
  CHECK(r.foot.scalar() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.foot.hs().norm() <= 1e-12);
  check_result(TripleSystem::scalar(3), p, r);
}

TEST_CASE("projection onto the diagonal: closed form") {
  const TripleSystem m = TripleSystem::diagonal(2);
  const ConePoint p(UnitizedHermitian(1.0, 0.6 * oracle::sigma1()));
  const ProjectionResult r = project(m, p);
  CHECK((r.foot.materialize() - 0.8 * oracle::Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK(r.foot.scalar() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((r.foot.hs() + 0.2 * oracle::Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK(hs_norm(whiten(r.foot, r.normal) - std::atanh(0.6) * s1) <= 1e-10);
  check_result(m, p, r);
}

TEST_CASE("projection invariants on random inputs") {
  Sampler y(model(4), 2);
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1.0, 1.0, 2.0, 2.0;
  const Matrix u = y.unitary_matrix();
  const std::vector<TripleSystem> systems{TripleSystem::diagonal(4), TripleSystem::scalar(4), TripleSystem::block(4, 2),
                                          TripleSystem::commutant(UnitizedHermitian(0.0, u * d * u.adjoint()))};
  for (const auto& m : systems) {
    for (std::uint64_t t = 0; t < 5; ++t) {
      Sampler s(model(4), 20 + t);
      const ConePoint p = s.cone_point(), q = s.cone_point();
      const ProjectionResult rp = project(m, p), rq = project(m, q);
      check_result(m, p, rp);
      CHECK(rp.iterations <= 200);
      CHECK(distance(rp.foot, rq.foot) <= distance(p, q) + 1e-8);

      ProjectionOptions restart;
      restart.start = s.cone_point();
      CHECK(distance(project(m, p, restart).foot, rp.foot) <= 1e-6);
    }
  }
}

TEST_CASE("the foot minimizes distance over the submanifold") {
  const TripleSystem m = TripleSystem::block(3, 2);
  Sampler s(model(3), 3);
  const ConePoint p = s.cone_point();
  const ProjectionResult r = project(m, p);
  const double d = odist(r.foot, p);
  CHECK(d == doctest::Approx(distance(r.foot, p)).epsilon(1e-10));
  for (int i = 0; i < 100; ++i) CHECK(d <= odist(s.point_in(m, 3.0), p) + 1e-9);
}

TEST_CASE("options and errors") {
  const TripleSystem m = TripleSystem::block(3, 2);
  Sampler s(model(3), 4);
  const ConePoint p = s.cone_point();
  ProjectionOptions tight;
  tight.max_iter = 0;
  try {
    project(m, p, tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations == 0);
    CHECK(e.residual > 0.0);
    CHECK(e.best_hs.rows() == 3);
  }

  ProjectionOptions bad;
  bad.shrink = 1.5;
  CHECK_THROWS_AS(project(m, p, bad), DomainError);

  Matrix wild = Matrix::Zero(3, 3);
  wild.diagonal() << 1e-5, 1.0, 1e4;
  CHECK_THROWS_AS(project(m, ConePoint(UnitizedHermitian::from_matrix(wild, 1.0))), DomainError);
  CHECK_THROWS_AS(project(TripleSystem::diagonal(2), p), DimensionError);
}

TEST_CASE("e^a = e^x e^v e^x") {
  const TripleSystem m = TripleSystem::diagonal(2);

  const UnitizedHermitian in_m(0.4, oracle::sigma3() * 0.7);
  const MvmDecomposition inside = decompose_mvm(m, in_m);
  CHECK(hs_norm(inside.x - 0.5 * in_m) <= 1e-10);
  CHECK(hs_norm(inside.v) <= 1e-10);

  const MvmDecomposition normal = decompose_mvm(m, 0.3 * s1);
  CHECK(hs_norm(normal.x) <= 1e-10);
  CHECK(hs_norm(normal.v - 0.3 * s1) <= 1e-10);

  // e^a = I + 0.6 s1.
  const UnitizedHermitian a = mat_log(ConePoint(UnitizedHermitian(1.0, 0.6 * oracle::sigma1())));
  const MvmDecomposition c = decompose_mvm(m, a);
  CHECK(hs_norm(c.x - UnitizedHermitian(0.0, 0.5 * std::log(0.8) * oracle::Matrix::Identity(2, 2))) <= 1e-10);
  CHECK(hs_norm(c.v - std::atanh(0.6) * s1) <= 1e-10);
  CHECK(std::atanh(0.6) == doctest::Approx(0.6931).epsilon(1e-4));

  for (std::uint64_t t = 0; t < 10; ++t) {
    Sampler s(model(4), 40 + t);
    const TripleSystem bm = TripleSystem::block(4, 2);
    const UnitizedHermitian r = s.tangent(2.0);
    const MvmDecomposition dcm = decompose_mvm(bm, r);
    const Matrix ex = oracle::expm_taylor(dcm.x.materialize());
    CHECK((ex * oracle::expm_taylor(dcm.v.materialize()) * ex - oracle::expm_taylor(r.materialize())).norm() <= 1e-7);
    CHECK(bm.span_residual(dcm.x) <= 1e-8);
    CHECK(hs_norm(bm.project(dcm.v)) <= 1e-8);

    // y -> |ln(e^{a/2} e^{-y} e^{a/2})| is smallest at y = 2x along any line.
    const UnitizedHermitian dir = bm.combine(RealVector::Random(bm.dim()).normalized());
    const ConePoint half = mat_exp(0.5 * r);
    int argmin = -1;
    double best = 1e300;
    for (int i = 0; i <= 40; ++i) {
      const double tau = -0.1 + 0.005 * i;
      const double f = hs_norm(mat_log(ConePoint(congruence(half, mat_exp(-1.0 * (2.0 * dcm.x + tau * dir))))));
      if (f < best) {
        best = f;
        argmin = i;
      }
    }
    CHECK(argmin == 20);
  }
}

TEST_CASE("relative polar decomposition") {
  const TripleSystem m = TripleSystem::diagonal(3);
  Sampler s(model(3), 5);
  const UnitizedOperator w = UnitizedOperator::from_matrix(s.unitary_matrix());
  const RelativePolar up = polar_relative(m, w);
  CHECK((up.ex.materialize() - Matrix::Identity(3, 3)).norm() <= 1e-9);
  CHECK((up.ev.materialize() - Matrix::Identity(3, 3)).norm() <= 1e-9);
  CHECK((up.u.materialize() - w.materialize()).norm() <= 1e-9);

  const UnitizedHermitian x0 = s.element_of(m, 1.0);
  const RelativePolar xp = polar_relative(m, UnitizedOperator(mat_exp(x0).op()));
  CHECK((xp.ex.materialize() - mat_exp(x0).materialize()).norm() <= 1e-8);
  CHECK((xp.ev.materialize() - Matrix::Identity(3, 3)).norm() <= 1e-8);
  CHECK(unitarity_defect(xp.u) <= 1e-9);

  for (int t = 0; t < 10; ++t) {
    const UnitizedOperator g = s.invertible();
    const RelativePolar f = polar_relative(m, g);
    CHECK((f.ex.materialize() * f.ev.materialize() * f.u.materialize() - g.materialize()).norm() <= 1e-7);
    CHECK(unitarity_defect(f.u) <= 1e-9);
    const Matrix ex = f.ex.materialize();
    CHECK((ex - Matrix(ex.diagonal().asDiagonal())).norm() <= 1e-8);
    CHECK(hs_norm(m.project(mat_log(f.ev))) <= 1e-8);

    ProjectionOptions restart;
    restart.start = s.cone_point();
    const RelativePolar again = polar_relative(m, g, restart);
    CHECK((again.ex.materialize() - ex).norm() <= 1e-6);
    CHECK((again.ev.materialize() - f.ev.materialize()).norm() <= 1e-6);
  }
  CHECK_THROWS_AS(polar_relative(m, UnitizedOperator::from_matrix(Matrix::Zero(3, 3))), SingularError);
}

TEST_CASE("lambda + a = D e^w D") {
  const DiagDecomposition zero = diag_decompose(Matrix::Zero(3, 3), 2.0);
  CHECK((zero.d - std::sqrt(2.0) * Matrix::Identity(3, 3)).norm() <= 1e-12);
  CHECK(zero.w.norm() <= 1e-12);

  const DiagDecomposition t = diag_decompose(0.6 * oracle::sigma1(), 1.0);
  CHECK((t.d * t.d - 0.8 * Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK(t.d(0, 0).real() == doctest::Approx(0.8944).epsilon(1e-4));
  CHECK((t.w - std::atanh(0.6) * oracle::sigma1()).norm() <= 1e-10);
  CHECK(t.foot_scalar == doctest::Approx(1.0).epsilon(1e-12));

  Matrix a(2, 2);
  a << 0.1, 0.3, 0.3, -0.2;
  const DiagDecomposition g = diag_decompose(a, 1.0);
  CHECK(g.w.diagonal().cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((g.d * oracle::expm_taylor(g.w) * g.d - (Matrix::Identity(2, 2) + a)).norm() <= 1e-7);

  // Derivative-free minimization of the distance to diag(e^u1, e^u2) on the unit leaf.
  const Matrix target = Matrix::Identity(2, 2) + a;
  const auto nm = oracle::nelder_mead(
      [&](const std::vector<double>& u) {
        Matrix q = Matrix::Zero(2, 2);
        q(0, 0) = std::exp(u[0]);
        q(1, 1) = std::exp(u[1]);
        return oracle::pair_distance(1.0, target, 1.0, q);
      },
      {0.0, 0.0});
  CHECK(std::abs(g.d(0, 0).real() - std::exp(0.5 * nm.x[0])) <= 1e-4);
  CHECK(std::abs(g.d(1, 1).real() - std::exp(0.5 * nm.x[1])) <= 1e-4);

  CHECK_THROWS_AS(diag_decompose(0.6 * oracle::sigma1(), 0.5), DomainError);
  CHECK_THROWS_AS(diag_decompose(a, -1.0), DomainError);
}

TEST_CASE("normal bundle coordinates") {
  const TripleSystem m = TripleSystem::diagonal(3);
  Sampler s(model(3), 6);
  const ConePoint q = s.point_in(m, 1.5);
  CHECK((e_map(m, q, UnitizedHermitian::zero(3)).materialize() - q.materialize()).norm() <= 1e-12);
  const NormalCoords fixed = nm_coords(m, q);
  CHECK(distance(fixed.q, q) <= 1e-10);
  CHECK(hs_norm(fixed.v) <= 1e-10);

  for (int t = 0; t < 10; ++t) {
    const ConePoint base = s.point_in(m, 1.5);
    const UnitizedHermitian w = s.tangent();
    UnitizedHermitian v = w - project_tangent(m, base, w);
    v = (s.uniform(0.1, 1.0) / norm_at(base, v)) * v;
    const ConePoint p = e_map(m, base, v);
    const NormalCoords back = nm_coords(m, p);
    CHECK(distance(back.q, base) <= 1e-6);
    CHECK(hs_norm(back.v - v) <= 1e-6);
    CHECK((e_map(m, back.q, back.v).materialize() - p.materialize()).norm() <= 1e-7);
  }
  CHECK_THROWS_AS(e_map(m, q, UnitizedHermitian::identity(3)), DomainError);
  CHECK_THROWS_AS(e_map(m, s.cone_point(), UnitizedHermitian::zero(3)), DomainError);
}

TEST_CASE("block factorization") {
  Matrix a0(2, 2);
  a0 << 0.5, Complex(0.2, 0.1), Complex(0.2, -0.1), -0.3;
  Matrix b = Matrix::Zero(3, 3);
  b.topLeftCorner(2, 2) = a0;
  const BlockDecomposition trivial = block_decompose(b, 2);
  CHECK((trivial.a - a0).norm() <= 1e-9);
  CHECK(trivial.x.norm() <= 1e-9);
  CHECK(trivial.y.norm() <= 1e-9);
  CHECK(trivial.distance <= 1e-9);

  // n = 2, k = 1, b = 0.6 s1 against a three-parameter fit of the reconstruction.
  const BlockDecomposition small = block_decompose(0.6 * oracle::sigma1(), 1);
  const Matrix eb = oracle::expm_taylor(0.6 * oracle::sigma1());
  CHECK((block_reconstruct(small.a, small.x, small.y) - eb).norm() <= 1e-7);
  CHECK((block_oracle(small.a, small.x, small.y) - eb).norm() <= 1e-7);
  const auto fit = oracle::nelder_mead(
      [&](const std::vector<double>& u) {
        const Matrix aa = Matrix::Constant(1, 1, u[0]), xx = Matrix::Constant(1, 1, u[1]),
                     yy = Matrix::Constant(1, 1, u[2]);
        return (block_oracle(aa, xx, yy) - eb).squaredNorm();
      },
      {0.0, 0.0, 0.0});
  CHECK(fit.value <= 1e-12);
  CHECK(std::abs(small.a(0, 0).real() - fit.x[0]) <= 1e-4);
  CHECK(std::abs(small.x(0, 0).real() - fit.x[1]) <= 1e-4);
  CHECK(std::abs(std::abs(small.y(0, 0)) - std::abs(fit.x[2])) <= 1e-4);

  // Constants of the distance formula, fitted by least squares against the
  // oracle distance and then compared with the frozen values.
  Eigen::MatrixXd lhs(0, 2);
  Eigen::VectorXd rhs(0);
  for (std::uint64_t t = 0; t < 8; ++t) {
    const int n = 3 + static_cast<int>(t % 2), k = 1 + static_cast<int>(t % 2);
    Sampler s(model(n), 60 + t);
    const Matrix bb = s.tangent(1.5).hs();
    const BlockDecomposition dcm = block_decompose(bb, k);
    CHECK((block_reconstruct(dcm.a, dcm.x, dcm.y) - oracle::expm_taylor(bb)).norm() <= 1e-7);
    CHECK((block_oracle(dcm.a, dcm.x, dcm.y) - oracle::expm_taylor(bb)).norm() <= 1e-7);
    const Matrix ha = oracle::hermitian_function(dcm.a, [](double v) { return std::exp(-0.5 * v); });
    Matrix foot = Matrix::Identity(n, n);
    foot.topLeftCorner(k, k) = oracle::hermitian_function(dcm.a, [](double v) { return std::exp(v); });
    const double d = oracle::pair_distance(1.0, foot, 1.0, oracle::expm_taylor(bb));
    CHECK(dcm.distance == doctest::Approx(d).epsilon(1e-9));
    lhs.conservativeResize(lhs.rows() + 1, 2);
    rhs.conservativeResize(rhs.size() + 1);
    lhs(lhs.rows() - 1, 0) = (dcm.y * ha).squaredNorm();
    lhs(lhs.rows() - 1, 1) = dcm.x.squaredNorm();
    rhs(rhs.size() - 1) = d * d;
    CHECK(block_distance_formula(dcm) == doctest::Approx(d).epsilon(1e-8));
  }
  const Eigen::VectorXd c = lhs.colPivHouseholderQr().solve(rhs);
  CHECK(c(0) == doctest::Approx(kBlockDistY).epsilon(1e-6));
  CHECK(c(1) == doctest::Approx(kBlockDistX).epsilon(1e-6));

  CHECK_THROWS_AS(block_decompose(b, 3), DomainError);
  CHECK_THROWS_AS(block_decompose(b, 0), DomainError);
}

TEST_CASE("g = lambda r e^v u") {
  Sampler s(model(3), 7);
  const UnitizedOperator w = UnitizedOperator::from_matrix(s.unitary_matrix());
  const BlockPolar uw = full_block_polar(w, 1);
  CHECK(uw.lambda == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((uw.r - Matrix::Identity(1, 1)).norm() <= 1e-9);
  CHECK(hs_norm(uw.v) <= 1e-9);
  CHECK((uw.u.materialize() - w.materialize()).norm() <= 1e-9);

  Matrix a0(2, 2);
  a0 << 0.4, Complex(0.1, 0.3), Complex(0.1, -0.3), -0.2;
  Matrix g = Matrix::Identity(3, 3);
  g.topLeftCorner(2, 2) = oracle::expm_taylor(a0);
  const BlockPolar f = full_block_polar(UnitizedOperator::from_matrix(2.0 * g, 2.0), 2);
  CHECK(f.lambda == doctest::Approx(2.0).epsilon(1e-10));
  CHECK((f.r - oracle::expm_taylor(a0)).norm() <= 1e-8);
  CHECK(hs_norm(f.v) <= 1e-8);
  CHECK((f.u.materialize() - Matrix::Identity(3, 3)).norm() <= 1e-8);

  for (int t = 0; t < 10; ++t) {
    const UnitizedOperator h = s.invertible();
    const BlockPolar bp = full_block_polar(h, 1);
    CHECK((block_polar_reconstruct(bp).materialize() - h.materialize()).norm() <= 1e-7);
    CHECK(unitarity_defect(bp.u) <= 1e-9);
    CHECK(bp.v.scalar() == 0.0);
    CHECK(bp.v.hs().topLeftCorner(1, 1).norm() == 0.0);
    ProjectionOptions restart;
    restart.start = s.cone_point();
    const BlockPolar again = full_block_polar(h, 1, restart);
    CHECK(std::abs(again.lambda - bp.lambda) <= 1e-6);
    CHECK((again.r - bp.r).norm() <= 1e-6);
    CHECK(hs_norm(again.v - bp.v) <= 1e-6);
  }
}
