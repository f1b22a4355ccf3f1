#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spdcone/foliation.hpp"
#include "spdcone/random.hpp"

using namespace spdcone;

namespace {

RandomModel model(int n) {
  RandomModel m;
  m.n = n;
  m.seed = 11;
  return m;
}

ConePoint on_leaf(Sampler& s, double lambda) { return leaf_project(s.cone_point(), lambda); }

}  // namespace

TEST_CASE("leaves") {
  const ConePoint p(UnitizedHermitian(2.0, 0.3 * oracle::sigma1()));
  CHECK(leaf_of(p) == 2.0);
  CHECK(leaf_of(ConePoint::identity(3)) == 1.0);

  Sampler s(model(3), 0);
  const ConePoint a = on_leaf(s, 1.7), b = on_leaf(s, 1.7);
  CHECK(leaf_of(a) == 1.7);
  CHECK(std::abs(leaf_of(geodesic_eval(a, b, 0.5)) - 1.7) <= 1e-10);
  CHECK(std::abs(leaf_of(geodesic_eval(a, b, 0.3)) - 1.7) <= 1e-10);
}

TEST_CASE("leaf projection") {
  const ConePoint two(UnitizedHermitian(2.0, Matrix::Zero(2, 2)));
  const ConePoint one = leaf_project(two, 1.0);
  CHECK(one.scalar() == 1.0);
  CHECK(one.hs().norm() == 0.0);

  Sampler s(model(3), 1);
  const ConePoint p = s.cone_point();
  CHECK((leaf_project(p, leaf_of(p)).materialize() - p.materialize()).norm() == 0.0);
  const ConePoint q = leaf_project(p, 0.4);
  CHECK(leaf_of(q) == 0.4);
  CHECK((q.materialize() * p.materialize() - p.materialize() * q.materialize()).norm() <= 1e-12);

  for (int t = 0; t < 20; ++t) {
    const ConePoint x = on_leaf(s, 2.0), y = on_leaf(s, 2.0);
    CHECK(std::abs(distance(leaf_project(x, 1.0), leaf_project(y, 1.0)) - distance(x, y)) <= 1e-10);
  }

  CHECK_THROWS_AS(leaf_project(p, 0.0), DomainError);
  CHECK_THROWS_AS(leaf_project(p, -1.0), DomainError);
}

TEST_CASE("splitting") {
  const ConePoint three(UnitizedHermitian(3.0, Matrix::Zero(2, 2)));
  const LeafPoint sp = split(three);
  CHECK(sp.leaf == 3.0);
  CHECK(sp.point.scalar() == 1.0);
  CHECK(sp.point.hs().norm() == 0.0);

  CHECK(leaf_distance(2.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(distance(ConePoint(UnitizedHermitian(2.0, Matrix::Zero(2, 2))), ConePoint::identity(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(leaf_distance(0.0, 1.0), DomainError);

  Sampler s(model(4), 2);
  for (int t = 0; t < 20; ++t) {
    const ConePoint p = s.cone_point(), q = s.cone_point();
    const LeafPoint a = split(p), b = split(q);
    CHECK(a.point.scalar() == 1.0);
    CHECK((unsplit(a.point, a.leaf).materialize() - p.materialize()).norm() <= 1e-12 * p.materialize().norm());
    const double d = distance(p, q), da = distance(a.point, b.point), dl = leaf_distance(a.leaf, b.leaf);
    CHECK(std::abs(d * d - (da * da + dl * dl)) <= 1e-8);
    // Distance from p to the leaf through q is realized by leaf_project.
    CHECK(std::abs(distance(p, leaf_project(p, b.leaf)) - dl) <= 1e-12);
  }
}

TEST_CASE("vertical geodesics") {
  Sampler s(model(3), 3);
  for (int t = 0; t < 10; ++t) {
    const ConePoint p = s.cone_point();
    const double lambda = s.uniform(0.2, 5.0);
    CHECK((vertical_geodesic(p, lambda, 0.0).materialize() - p.materialize()).norm() == 0.0);
    CHECK(std::abs(leaf_of(vertical_geodesic(p, lambda, 1.0)) - lambda) <= 1e-12 * lambda);
    // It is the geodesic from p to its leaf projection.
    const ConePoint g = geodesic_eval(p, leaf_project(p, lambda), 0.4);
    CHECK((vertical_geodesic(p, lambda, 0.4).materialize() - g.materialize()).norm() <= 1e-10 * g.materialize().norm());

    // Velocity gamma(t) ln(lambda/alpha) is orthogonal to the leaf.
    const double tt = s.uniform(0.0, 1.0);
    const ConePoint c = vertical_geodesic(p, lambda, tt);
    const UnitizedHermitian vel = std::log(lambda / leaf_of(p)) * c.op();
    const UnitizedHermitian w(0.0, s.tangent().hs());  // tangent to the leaf
    CHECK(std::abs(metric_at(c, vel, w)) <= 1e-9);

    // The normal space to the leaf is span(p).
    const UnitizedHermitian r = s.tangent();
    const UnitizedHermitian along = (metric_at(p, r, p.op()) / metric_at(p, p.op(), p.op())) * p.op();
    const UnitizedHermitian rest = r - along;
    CHECK(std::abs(rest.scalar()) <= 1e-9 * (1.0 + std::abs(r.scalar())));

    // Leaf projection is parallel transport along the vertical geodesic.
    const ConePoint end = leaf_project(p, lambda);
    const UnitizedHermitian v(0.0, s.tangent().hs());
    const UnitizedHermitian moved = (lambda / leaf_of(p)) * v;
    CHECK(hs_norm(parallel_transport(p, end, v) - moved) <= 1e-9 * (1.0 + hs_norm(moved)));

    CHECK(std::abs(sectional(p, s.tangent(), p.op())) <= 1e-12);
  }
}
