#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spdcone/geometry.hpp"
#include "spdcone/random.hpp"
#include "spdcone/triple.hpp"

using namespace spdcone;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

const UnitizedHermitian s1(0.0, oracle::sigma1());
const UnitizedHermitian s2(0.0, oracle::sigma2());
const UnitizedHermitian s3(0.0, oracle::sigma3());

RandomModel model(int n) {
  RandomModel m;
  m.n = n;
  m.seed = 99;
  return m;
}

UnitizedHermitian bracket2(const UnitizedHermitian& a, const UnitizedHermitian& b, const UnitizedHermitian& c) {
  return commutator(commutator(UnitizedOperator(a), UnitizedOperator(b)), UnitizedOperator(c)).hermitian();
}

}  // namespace

TEST_CASE("hs coordinates are an isometry") {
  Sampler s(model(3), 0);
  for (int i = 0; i < 10; ++i) {
    const UnitizedHermitian x = s.tangent(3.0), y = s.tangent(3.0);
    CHECK(hs_coordinates(x).dot(hs_coordinates(y)) == doctest::Approx(hs_inner(x, y)).epsilon(1e-13));
    CHECK(hs_norm(from_hs_coordinates(hs_coordinates(x), 3) - x) < 1e-14);
  }
}

TEST_CASE("is_triple_system") {
  std::vector<UnitizedHermitian> diag3{UnitizedHermitian::identity(3)};
  for (int i = 0; i < 3; ++i) diag3.emplace_back(0.0, unit(3, i, i));
  // The identity and the scalar line are independent in the pair model.
  CHECK(is_triple_system(diag3).ok);

  CHECK(is_triple_system(std::vector<UnitizedHermitian>{s1}).ok);

  const std::vector<UnitizedHermitian> bad{UnitizedHermitian(0.0, unit(2, 0, 0)), s1};
  const ClosureCheck c = is_triple_system(bad);
  CHECK_FALSE(c.ok);
  CHECK(c.max_residual > 0.1);
  // [[E11, s1], s1] = 2 s3 directly.
  CHECK((bracket2(bad[0], s1, s1).hs() - 2.0 * oracle::sigma3()).norm() < 1e-15);

  CHECK(is_triple_system(std::vector<UnitizedHermitian>{s1, s3}).ok);
  CHECK_THROWS_AS(is_triple_system(std::vector<UnitizedHermitian>{s1, 2.0 * s1}), DegenerateError);
  CHECK_THROWS_AS(TripleSystem{bad}, DomainError);
}

TEST_CASE("builders") {
  CHECK(TripleSystem::diagonal(3).dim() == 4);
  CHECK(TripleSystem::scalar(3).dim() == 1);
  CHECK(TripleSystem::full(2).dim() == 5);
  CHECK(TripleSystem::full(3).dim() == 10);
  CHECK(TripleSystem::block(4, 2).dim() == 4);
  CHECK(TripleSystem::block(4, 2).block_size() == 2);

  for (const auto& m : {TripleSystem::diagonal(3), TripleSystem::scalar(3), TripleSystem::full(3),
                        TripleSystem::block(4, 2)})
    CHECK(is_triple_system(m.basis()).ok);

  // Commutant of y with a repeated eigenvalue.
  Sampler s(model(4), 1);
  const Matrix u = s.unitary_matrix();
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1.0, 1.0, -0.5, 2.0;
  const UnitizedHermitian y(0.3, u * d * u.adjoint());
  const TripleSystem cm = TripleSystem::commutant(y);
  CHECK(cm.dim() == 7);  // u(2) x u(1) x u(1) plus the scalar line
  for (const auto& b : cm.basis()) CHECK(op_norm(commutator(UnitizedOperator(b), UnitizedOperator(y))) <= 1e-12);
  CHECK(is_triple_system(cm.basis()).ok);

  const TripleSystem pm = TripleSystem::polynomial(s.tangent(2.0));
  CHECK(pm.dim() == 5);  // scalar line plus a, ..., a^4
  CHECK(is_triple_system(pm.basis()).ok);

  // exp of the block system is [[e^A, 0], [0, I]].
  const TripleSystem bm = TripleSystem::block(4, 2);
  const ConePoint p = s.point_in(bm, 1.5);
  const Matrix pm4 = p.materialize();
  CHECK(pm4.bottomRightCorner(2, 2).isIdentity(1e-12));
  CHECK(pm4.topRightCorner(2, 2).norm() < 1e-12);
  CHECK(pm4.bottomLeftCorner(2, 2).norm() < 1e-12);
  CHECK(std::abs(p.scalar() - 1.0) < 1e-12);

  CHECK_THROWS(TripleSystem::block(3, 0));
}

TEST_CASE("projection onto the span") {
  const TripleSystem m = TripleSystem::diagonal(2);
  Matrix w(2, 2);
  w << 1, 5, 5, 2;
  const UnitizedHermitian x(0.3, w);
  CHECK(hs_norm(m.project(x) - UnitizedHermitian(0.3, diag2(1, 2))) < 1e-14);
  CHECK(m.span_residual(x) == doctest::Approx(std::sqrt(4.0 * 50.0)).epsilon(1e-14));
  CHECK(hs_norm(m.combine(m.coefficients(x)) - m.project(x)) < 1e-14);
}

TEST_CASE("tangent spaces") {
  const TripleSystem line(std::vector<UnitizedHermitian>{s1});
  const ConePoint p(UnitizedHermitian::from_matrix(diag2(4.0, 1.0), 1.0));
  const auto tb = tangent_basis_at(line, p);
  REQUIRE(tb.size() == 1);
  Matrix want(2, 2);
  want << 0, 2, 2, 0;
  CHECK((tb[0].materialize() - want).norm() < 1e-14);

  const auto at_one = tangent_basis_at(line, ConePoint::identity(2));
  CHECK(hs_norm(at_one[0] - s1) < 1e-15);

  // Commutative associative systems have the same tangent space everywhere.
  const TripleSystem dm = TripleSystem::diagonal(3);
  Sampler s(model(3), 2);
  const ConePoint q = s.point_in(dm, 2.0);
  for (const auto& b : tangent_basis_at(dm, q)) CHECK(dm.span_residual(b) < 1e-12);

  const TripleSystem d2 = TripleSystem::diagonal(2);
  CHECK(hs_norm(project_tangent(d2, ConePoint::identity(2), UnitizedHermitian(0.3, [] {
                  Matrix w(2, 2);
                  w << 1, 5, 5, 2;
                  return w;
                }())) -
                UnitizedHermitian(0.3, diag2(1, 2))) < 1e-14);

  for (std::uint64_t t = 0; t < 20; ++t) {
    Sampler r(model(4), 10 + t);
    const TripleSystem bm = TripleSystem::block(4, 2);
    const ConePoint at = r.point_in(bm, 1.5);
    const UnitizedHermitian w = r.tangent(2.0);
    const UnitizedHermitian pw = project_tangent(bm, at, w);
    const auto basis = tangent_basis_at(bm, at);
    for (const auto& b : basis) CHECK(std::abs(metric_at(at, w - pw, b)) <= 1e-10);
    CHECK(hs_norm(project_tangent(bm, at, pw) - pw) <= 1e-10 * (1.0 + hs_norm(pw)));
  }
}

TEST_CASE("point membership") {
  const TripleSystem line(std::vector<UnitizedHermitian>{s1});
  const TripleSystem dm = TripleSystem::diagonal(2);
  CHECK(contains_point(line, ConePoint::identity(2)));
  CHECK(contains_point(dm, ConePoint(UnitizedHermitian::from_matrix(diag2(2.0, 0.5), 1.0))));
  const ConePoint twice(UnitizedHermitian(2.0, Matrix::Zero(2, 2)));
  CHECK_FALSE(contains_point(line, twice));
  CHECK(membership_residual(line, twice) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("bracket algebra") {
  const BracketAlgebra ab = bracket_algebra(TripleSystem::diagonal(3));
  CHECK(ab.k_basis.empty());
  CHECK(ab.g_dim == 4);

  const BracketAlgebra two = bracket_algebra(TripleSystem(std::vector<UnitizedHermitian>{s1, s3}));
  REQUIRE(two.k_basis.size() == 1);
  // k is spanned by [s1, s3] = -2i s2 = -2 [[0, -1], [1, 0]].
  const Matrix k = two.k_basis[0].materialize();
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK(std::abs(std::abs(k.cwiseProduct(rot.conjugate()).sum()) - k.norm() * rot.norm()) < 1e-12);
  CHECK(two.g_dim == 3);
  CHECK(two.max_residual() <= 1e-9);

  // [m, m] for all Hermitian 2x2 operators is the traceless skew part.
  const BracketAlgebra full = bracket_algebra(TripleSystem::full(2));
  CHECK(full.k_basis.size() == 3);
  CHECK(full.g_dim == 8);
  CHECK(full.max_residual() <= 1e-9);
  for (const auto& kb : full.k_basis) {
    CHECK(std::abs(kb.materialize().trace()) < 1e-12);
    CHECK((kb.materialize() + kb.materialize().adjoint()).norm() < 1e-12);
  }

  Sampler s(model(5), 3);
  for (const auto& m : {TripleSystem::full(3), TripleSystem::block(5, 3), TripleSystem::polynomial(s.tangent(2.0))})
    CHECK(bracket_algebra(m).max_residual() <= 1e-9);
}

TEST_CASE("qpq closure") {
  CHECK(qpq_closure_check(TripleSystem::diagonal(3), 20) <= 1e-12);
  CHECK(qpq_closure_check(TripleSystem(std::vector<UnitizedHermitian>{s1}), 20) <= 1e-10);
  CHECK(qpq_closure_check(TripleSystem(std::vector<UnitizedHermitian>{s1, s2, s3}), 50) <= 1e-8);
  CHECK(qpq_closure_check(TripleSystem::block(4, 2), 50) <= 1e-8);
}

TEST_CASE("convexity and transport tangency") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Sampler s(model(4), 100 + t);
    const TripleSystem m = TripleSystem::block(4, 3);
    const ConePoint p = s.point_in(m, 2.0), q = s.point_in(m, 2.0);
    for (double u : {0.25, 0.5, 0.75}) CHECK(membership_residual(m, geodesic_eval(p, q, u)) <= 1e-7);

    const UnitizedHermitian w = s.tangent();
    const UnitizedHermitian tang = project_tangent(m, p, w);
    const UnitizedHermitian normal = w - tang;
    const UnitizedHermitian moved_t = parallel_transport(p, q, tang);
    const UnitizedHermitian moved_n = parallel_transport(p, q, normal);
    CHECK(hs_norm(moved_t - project_tangent(m, q, moved_t)) <= 1e-8);
    CHECK(hs_norm(project_tangent(m, q, moved_n)) <= 1e-8);
  }
}
