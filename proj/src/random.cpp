#include "spdcone/random.hpp"

#include <algorithm>
#include <cmath>

namespace spdcone {

namespace {

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t trial) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
}

}  // namespace

Sampler::Sampler(const RandomModel& model, std::uint64_t trial) : model_(model) {
  if (!(model.lo > 0.0 && model.hi >= model.lo)) throw DomainError("random model: need 0 < lo <= hi");
  if (model.n < 1) throw DomainError("random model: dimension must be positive");
  auto seq = make_seed(model.seed, trial);
  rng_.seed(seq);
}

double Sampler::uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

double Sampler::normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

UnitizedHermitian Sampler::tangent() { return tangent(model_.norm_bound); }

UnitizedHermitian Sampler::tangent(double bound) {
  const int n = model_.n;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = uniform(-1.0, 1.0);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
      m(j, i) = std::conj(m(i, j));
    }
  }
  UnitizedHermitian x = UnitizedHermitian::hermitian_part_of(uniform(-1.0, 1.0), m);
  const double nrm = hs_norm(x);
  return (bound * uniform(0.05, 1.0) / nrm) * x;
}

ConePoint Sampler::cone_point() {
  const int n = model_.n;
  const double a = std::log(model_.lo);
  const double b = std::log(model_.hi);
  const double scalar = std::exp(uniform(a, b));
  Eigensystem es;
  es.values.resize(n);
  for (int i = 0; i < n; ++i) es.values(i) = std::exp(uniform(a, b));
  std::sort(es.values.data(), es.values.data() + n);
  es.vectors = unitary_matrix();
  return ConePoint::from_spectral(scalar, std::move(es));
}

Matrix Sampler::unitary_matrix() {
  const int n = model_.n;
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(normal(), normal());
  const Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

UnitizedOperator Sampler::invertible() {
  const ConePoint a = cone_point();
  return UnitizedOperator(a.op()) * UnitizedOperator::from_matrix(unitary_matrix());
}

UnitizedHermitian Sampler::element_of(const TripleSystem& m, double radius) {
  RealVector c(m.dim());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = uniform(-1.0, 1.0);
  const double nrm = c.norm();
  if (nrm > 0.0) c *= radius * uniform(0.05, 1.0) / nrm;
  return m.combine(c);
}

ConePoint Sampler::point_in(const TripleSystem& m, double radius) { return mat_exp(element_of(m, radius)); }

}  // namespace spdcone
