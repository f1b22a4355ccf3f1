#include <algorithm>
#include <cmath>
#include <numeric>

#include "spdcone/opalg.hpp"

namespace spdcone {

namespace {

constexpr double kOffTol = 1e-14;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm2(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// Annihilates a(p, q) by the unitary J = diag(1, e^{-i phi}) R(theta), where
// phi is the phase of a(p, q) and R the real rotation diagonalizing the
// resulting real symmetric 2x2 block. Applies A <- J* A J and V <- V J.
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

Eigensystem eig_hermitian(const Matrix& input) {
  if (input.rows() != input.cols()) throw DimensionError("eig_hermitian: matrix is not square");
  Matrix a = hermitize_checked(input);
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);

  const double total = a.squaredNorm();
  const double target = kOffTol * kOffTol * total;
  int sweep = 0;
  while (off_diagonal_norm2(a) > target) {
    if (++sweep > kMaxSweeps)
      throw ConvergenceError("eig_hermitian: Jacobi sweeps exhausted", 0.0, a, std::sqrt(off_diagonal_norm2(a)),
                             sweep);
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  Eigensystem es;
  es.values.resize(n);
  es.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    es.values(k) = a(order[k], order[k]).real();
    es.vectors.col(k) = v.col(order[k]);
  }
  return es;
}

Matrix spectral_apply(const Eigensystem& es, const std::function<double(double)>& f) {
  RealVector fv(es.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) fv(k) = f(es.values(k));
  return es.vectors * fv.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

}  // namespace spdcone
