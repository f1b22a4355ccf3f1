#include "spdcone/triple.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "spdcone/geometry.hpp"

namespace spdcone {

namespace {

constexpr double kIndependenceTol = 1e-10;
const double kOffWeight = 2.0 * std::numbers::sqrt2;

int coord_size(int n) { return 1 + n * n; }

// Hermitian matrices orthonormal for Re tr(a b*): E_ii, (E_ij + E_ji)/sqrt2,
// i(E_ij - E_ji)/sqrt2.
std::vector<Matrix> hermitian_matrix_basis(int n) {
  std::vector<Matrix> out;
  const double r = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    out.push_back(e);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix re = Matrix::Zero(n, n);
      re(i, j) = r;
      re(j, i) = r;
      out.push_back(re);
      Matrix im = Matrix::Zero(n, n);
      im(i, j) = Complex(0.0, r);
      im(j, i) = Complex(0.0, -r);
      out.push_back(im);
    }
  return out;
}

// Orthonormal basis (columns) of the column space of `coords`; the columns
// are normalized first and the smallest singular value must exceed tol.
Eigen::MatrixXd orthonormal_columns(Eigen::MatrixXd coords, bool require_independent) {
  for (Eigen::Index j = 0; j < coords.cols(); ++j) {
    const double nrm = coords.col(j).norm();
    if (nrm == 0.0) {
      if (require_independent) throw DegenerateError("triple system: zero basis vector");
      continue;
    }
    coords.col(j) /= nrm;
  }
  if (coords.cols() == 0) return coords;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kIndependenceTol) ++rank;
  if (require_independent && rank < coords.cols()) throw DegenerateError("triple system: basis is linearly dependent");
  return svd.matrixU().leftCols(rank);
}

double residual_norm(const Eigen::MatrixXd& q, const RealVector& v) {
  if (q.cols() == 0) return v.norm();
  return (v - q * (q.transpose() * v)).norm();
}

UnitizedOperator skew_from_coords(const RealVector& c, int n) {
  const UnitizedHermitian h = from_hs_coordinates(c, n);
  return Complex(0.0, 1.0) * UnitizedOperator(h);
}

// Coordinates of the Hermitian element -i k for skew-Hermitian k.
RealVector skew_coords(const UnitizedOperator& k) {
  const UnitizedOperator h = Complex(0.0, -1.0) * k;
  return hs_coordinates(h.hermitian());
}

double closure_residual(const std::vector<UnitizedHermitian>& ortho, const Eigen::MatrixXd& q) {
  double worst = 0.0;
  const std::size_t d = ortho.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const UnitizedOperator k = commutator(ortho[i], ortho[j]);
      if (k.mat().norm() == 0.0) continue;
      for (std::size_t l = 0; l < d; ++l) {
        const UnitizedHermitian dd = commutator(k, ortho[l]).hermitian();
        worst = std::max(worst, residual_norm(q, hs_coordinates(dd)));
      }
    }
  return worst;
}

}  // namespace

RealVector hs_coordinates(const UnitizedHermitian& x) {
  const int n = x.dim();
  RealVector c(coord_size(n));
  c(0) = x.scalar();
  int k = 1;
  for (int i = 0; i < n; ++i) c(k++) = 2.0 * x.hs()(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      c(k++) = kOffWeight * x.hs()(i, j).real();
      c(k++) = kOffWeight * x.hs()(i, j).imag();
    }
  return c;
}

UnitizedHermitian from_hs_coordinates(const RealVector& c, int n) {
  if (c.size() != coord_size(n)) throw DimensionError("from_hs_coordinates: wrong coordinate length");
  Matrix m = Matrix::Zero(n, n);
  int k = 1;
  for (int i = 0; i < n; ++i) m(i, i) = 0.5 * c(k++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double re = c(k++) / kOffWeight;
      const double im = c(k++) / kOffWeight;
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  return UnitizedHermitian::hermitian_part_of(c(0), m);
}

// ---------------------------------------------------------------------------

TripleSystem::TripleSystem(std::vector<UnitizedHermitian> basis, std::string kind, double tol)
    : basis_(std::move(basis)), kind_(std::move(kind)) {
  if (basis_.empty()) throw DegenerateError("triple system: empty basis");
  n_ = basis_.front().dim();
  for (const auto& b : basis_) check_same_dim(n_, b.dim(), "triple system");
  orthonormalize();
  const double res = closure_residual(ortho_, ortho_coords_);
  if (res > tol)
    throw DomainError("span is not a Lie triple system (closure residual " + std::to_string(res) + ")");
}

void TripleSystem::orthonormalize() {
  Eigen::MatrixXd coords(coord_size(n_), static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t j = 0; j < basis_.size(); ++j) coords.col(static_cast<Eigen::Index>(j)) = hs_coordinates(basis_[j]);
  ortho_coords_ = orthonormal_columns(coords, true);
  ortho_.clear();
  for (Eigen::Index j = 0; j < ortho_coords_.cols(); ++j)
    ortho_.push_back(from_hs_coordinates(ortho_coords_.col(j), n_));
}

TripleSystem TripleSystem::diagonal(int n) {
  std::vector<UnitizedHermitian> b{UnitizedHermitian::identity(n)};
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    b.emplace_back(0.0, e);
  }
  TripleSystem m;
  m.basis_ = std::move(b);
  m.kind_ = "diagonal";
  m.n_ = n;
  m.orthonormalize();
  return m;
}

TripleSystem TripleSystem::scalar(int n) {
  TripleSystem m;
  m.basis_ = {UnitizedHermitian::identity(n)};
  m.kind_ = "scalar";
  m.n_ = n;
  m.orthonormalize();
  return m;
}

TripleSystem TripleSystem::commutant(const UnitizedHermitian& y) {
  const int n = y.dim();
  const std::vector<Matrix> herm = hermitian_matrix_basis(n);
  // Columns: coordinates of -i[X, Y] (Hermitian) for each Hermitian basis X.
  Eigen::MatrixXd lmap(coord_size(n), static_cast<Eigen::Index>(herm.size()));
  for (std::size_t j = 0; j < herm.size(); ++j) {
    const Matrix c = herm[j] * y.hs() - y.hs() * herm[j];
    lmap.col(static_cast<Eigen::Index>(j)) =
        hs_coordinates(UnitizedHermitian::hermitian_part_of(0.0, Complex(0.0, -1.0) * c));
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(lmap, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double cut = 1e-10 * std::max(top, 1.0);
  std::vector<UnitizedHermitian> b{UnitizedHermitian::identity(n)};
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    if (j < sv.size() && sv(j) > cut) continue;
    Matrix x = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < herm.size(); ++i) x += v(static_cast<Eigen::Index>(i), j) * herm[i];
    b.push_back(UnitizedHermitian::hermitian_part_of(0.0, x));
  }
  TripleSystem m;
  m.basis_ = std::move(b);
  m.kind_ = "commutant";
  m.n_ = n;
  m.orthonormalize();
  return m;
}

TripleSystem TripleSystem::block(int n, int k) {
  if (k < 1 || k > n) throw DomainError("block system: need 1 <= k <= n");
  std::vector<UnitizedHermitian> b;
  for (const Matrix& e : hermitian_matrix_basis(k)) {
    Matrix x = Matrix::Zero(n, n);
    x.topLeftCorner(k, k) = e;
    b.push_back(UnitizedHermitian::hermitian_part_of(0.0, x));
  }
  TripleSystem m;
  m.basis_ = std::move(b);
  m.kind_ = "block";
  m.n_ = n;
  m.block_k_ = k;
  m.orthonormalize();
  return m;
}

TripleSystem TripleSystem::polynomial(const UnitizedHermitian& a) {
  const int n = a.dim();
  std::vector<UnitizedHermitian> b{UnitizedHermitian::identity(n)};
  Eigen::MatrixXd q(coord_size(n), 1);
  q.col(0) = hs_coordinates(b.front());
  Matrix power = Matrix::Identity(n, n);
  for (int j = 1; j <= n; ++j) {
    power = power * a.hs();
    const double nrm = power.norm();
    if (nrm == 0.0) break;
    power /= nrm;
    const UnitizedHermitian cand = UnitizedHermitian::hermitian_part_of(0.0, power);
    const RealVector c = hs_coordinates(cand);
    if (residual_norm(q, c) <= 1e-8 * c.norm()) continue;
    b.push_back(cand);
    q = orthonormal_columns([&] {
      Eigen::MatrixXd all(coord_size(n), static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < b.size(); ++i) all.col(static_cast<Eigen::Index>(i)) = hs_coordinates(b[i]);
      return all;
    }(), true);
  }
  TripleSystem m;
  m.basis_ = std::move(b);
  m.kind_ = "polynomial";
  m.n_ = n;
  m.orthonormalize();
  return m;
}

TripleSystem TripleSystem::full(int n) {
  std::vector<UnitizedHermitian> b{UnitizedHermitian::identity(n)};
  for (const Matrix& e : hermitian_matrix_basis(n)) b.push_back(UnitizedHermitian::hermitian_part_of(0.0, e));
  TripleSystem m;
  m.basis_ = std::move(b);
  m.kind_ = "full";
  m.n_ = n;
  m.orthonormalize();
  return m;
}

RealVector TripleSystem::coefficients(const UnitizedHermitian& x) const {
  check_same_dim(n_, x.dim(), "triple system");
  return ortho_coords_.transpose() * hs_coordinates(x);
}

UnitizedHermitian TripleSystem::combine(const RealVector& coefficients) const {
  if (coefficients.size() != dim()) throw DimensionError("combine: wrong number of coefficients");
  return from_hs_coordinates(ortho_coords_ * coefficients, n_);
}

UnitizedHermitian TripleSystem::project(const UnitizedHermitian& x) const { return combine(coefficients(x)); }

double TripleSystem::span_residual(const UnitizedHermitian& x) const {
  check_same_dim(n_, x.dim(), "triple system");
  return residual_norm(ortho_coords_, hs_coordinates(x));
}

// ---------------------------------------------------------------------------

ClosureCheck is_triple_system(std::span<const UnitizedHermitian> vectors, double tol) {
  if (vectors.empty()) throw DegenerateError("is_triple_system: no vectors");
  const int n = vectors.front().dim();
  Eigen::MatrixXd coords(coord_size(n), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    check_same_dim(n, vectors[j].dim(), "is_triple_system");
    coords.col(static_cast<Eigen::Index>(j)) = hs_coordinates(vectors[j]);
  }
  const Eigen::MatrixXd q = orthonormal_columns(coords, true);
  std::vector<UnitizedHermitian> ortho;
  for (Eigen::Index j = 0; j < q.cols(); ++j) ortho.push_back(from_hs_coordinates(q.col(j), n));
  ClosureCheck out;
  out.max_residual = closure_residual(ortho, q);
  out.ok = out.max_residual <= tol;
  return out;
}

std::vector<UnitizedHermitian> tangent_basis_at(const TripleSystem& m, const ConePoint& p) {
  std::vector<UnitizedHermitian> out;
  out.reserve(m.basis().size());
  for (const auto& b : m.basis()) out.push_back(color(p, b));
  return out;
}

UnitizedHermitian project_tangent(const TripleSystem& m, const ConePoint& p, const UnitizedHermitian& w) {
  return color(p, m.project(whiten(p, w)));
}

double membership_residual(const TripleSystem& m, const ConePoint& p) { return m.span_residual(mat_log(p)); }

bool contains_point(const TripleSystem& m, const ConePoint& p, double tol) { return membership_residual(m, p) <= tol; }

double BracketAlgebra::max_residual() const { return std::max({mm_in_k, mk_in_m, kk_in_k}); }

BracketAlgebra bracket_algebra(const TripleSystem& m) {
  const auto& e = m.ortho_basis();
  const int n = m.n();
  std::vector<UnitizedOperator> brackets;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) brackets.push_back(commutator(e[i], e[j]));

  Eigen::MatrixXd coords(coord_size(n), static_cast<Eigen::Index>(brackets.size()));
  for (std::size_t j = 0; j < brackets.size(); ++j) coords.col(static_cast<Eigen::Index>(j)) = skew_coords(brackets[j]);
  // Rank of [m, m] with an absolute cut: the brackets of orthonormal
  // elements are O(1), and noise-level brackets of commuting pairs must not
  // be normalized up into spurious directions.
  Eigen::MatrixXd kq(coord_size(n), 0);
  if (coords.cols() > 0) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > kTripleTol) ++rank;
    kq = svd.matrixU().leftCols(rank);
  }

  BracketAlgebra out;
  for (Eigen::Index j = 0; j < kq.cols(); ++j) out.k_basis.push_back(skew_from_coords(kq.col(j), n));
  out.g_dim = m.dim() + static_cast<int>(out.k_basis.size());

  for (Eigen::Index j = 0; j < coords.cols(); ++j) out.mm_in_k = std::max(out.mm_in_k, residual_norm(kq, coords.col(j)));
  for (const auto& x : e)
    for (const auto& k : out.k_basis)
      out.mk_in_m = std::max(out.mk_in_m, m.span_residual(commutator(x, k).hermitian()));
  for (std::size_t i = 0; i < out.k_basis.size(); ++i)
    for (std::size_t j = i + 1; j < out.k_basis.size(); ++j)
      out.kk_in_k =
          std::max(out.kk_in_k, residual_norm(kq, skew_coords(commutator(out.k_basis[i], out.k_basis[j]))));
  return out;
}

double qpq_closure_check(const TripleSystem& m, int trials, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.0, 1.0);
  auto random_element = [&] {
    RealVector c(m.dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = unit(rng);
    const double nrm = c.norm();
    if (nrm > 0.0) c *= radius * scale(rng) / nrm;
    return m.combine(c);
  };
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const UnitizedOperator p(mat_exp(random_element()).op());
    const UnitizedOperator q(mat_exp(random_element()).op());
    const ConePoint qpq((q * p * q).hermitian());
    worst = std::max(worst, membership_residual(m, qpq));
  }
  return worst;
}

}  // namespace spdcone
