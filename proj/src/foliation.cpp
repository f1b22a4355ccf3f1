#include "spdcone/foliation.hpp"

#include <cmath>

namespace spdcone {

double leaf_of(const ConePoint& p) { return p.scalar(); }

ConePoint leaf_project(const ConePoint& p, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("leaf_project: lambda must be positive");
  if (lambda == leaf_of(p)) return p;
  UnitizedHermitian q = (lambda / leaf_of(p)) * p.op();
  // Force the leaf exactly; the rescaled scalar can be off by one ulp.
  q = UnitizedHermitian::hermitian_part_of(lambda, q.hs());
  return ConePoint(q);
}

LeafPoint split(const ConePoint& p) {
  const double lambda = leaf_of(p);
  return LeafPoint{lambda, leaf_project(p, 1.0)};
}

ConePoint unsplit(const ConePoint& s1, double lambda) { return leaf_project(s1, lambda); }

double leaf_distance(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("leaf_distance: leaves must be positive");
  return std::abs(std::log(alpha / beta));
}

ConePoint vertical_geodesic(const ConePoint& p, double lambda, double t) {
  if (!(lambda > 0.0)) throw DomainError("vertical_geodesic: lambda must be positive");
  const double s = std::pow(lambda / leaf_of(p), t);
  return ConePoint(s * p.op());
}

}  // namespace spdcone
