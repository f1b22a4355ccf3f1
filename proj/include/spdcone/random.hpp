#pragma once

// Seeded random instances for the property suites.

#include <cstdint>
#include <random>

#include "spdcone/opalg.hpp"
#include "spdcone/triple.hpp"

namespace spdcone {

struct RandomModel {
  std::uint64_t seed = 1;
  int n = 2;
  double lo = 0.1;  // spectral range of generated cone points
  double hi = 10.0;
  double norm_bound = 1.0;  // hs_norm bound for tangent vectors
};

/// Draws for one trial. The stream depends only on (model.seed, trial), so
/// trials can run in any order or in parallel.
class Sampler {
 public:
  Sampler(const RandomModel& model, std::uint64_t trial);

  double uniform(double a, double b);
  double normal();

  /// Entries uniform in [-1, 1] (scalar included), then scaled so that
  /// hs_norm lies in (0, norm_bound].
  UnitizedHermitian tangent();
  UnitizedHermitian tangent(double bound);
  /// Spectrum and scalar coordinate log-uniform in [lo, hi].
  ConePoint cone_point();
  /// Haar-like unitary from the QR factorization of a complex Gaussian.
  Matrix unitary_matrix();
  /// |g| u with |g| a cone point and u unitary.
  UnitizedOperator invertible();
  /// exp(x) with x a random element of m of norm at most `radius`.
  ConePoint point_in(const TripleSystem& m, double radius);
  UnitizedHermitian element_of(const TripleSystem& m, double radius);

  int n() const { return model_.n; }
  const RandomModel& model() const { return model_; }
  std::mt19937_64& engine() { return rng_; }

 private:
  RandomModel model_;
  std::mt19937_64 rng_;
};

}  // namespace spdcone
