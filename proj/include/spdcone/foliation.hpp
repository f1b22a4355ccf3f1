#pragma once

// The leaves Sigma_lambda = {lambda + a} of the cone and the splitting
// Sigma = Sigma_1 x Lambda.

#include "spdcone/geometry.hpp"

namespace spdcone {

/// A point together with its leaf. Leaf membership is the scalar coordinate.
struct LeafPoint {
  double leaf;
  ConePoint point;
};

double leaf_of(const ConePoint& p);

/// (lambda / leaf_of(p)) p.
ConePoint leaf_project(const ConePoint& p, double lambda);

/// (p / lambda, lambda) with lambda = leaf_of(p).
LeafPoint split(const ConePoint& p);
ConePoint unsplit(const ConePoint& s1, double lambda);

/// |ln(alpha / beta)|: the distance between the leaves Sigma_alpha and
/// Sigma_beta, and the metric of the Lambda factor.
double leaf_distance(double alpha, double beta);

/// The vertical geodesic t -> p (lambda / leaf_of(p))^t through p.
ConePoint vertical_geodesic(const ConePoint& p, double lambda, double t);

}  // namespace spdcone
