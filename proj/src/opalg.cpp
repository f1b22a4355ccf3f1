#include "spdcone/opalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace spdcone {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix eye(int n) { return Matrix::Identity(n, n); }

}  // namespace

void check_same_dim(int a, int b, const char* where) {
  if (a != b)
    throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
}

Matrix hermitize_checked(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  if (!all_finite(m)) throw DomainError("matrix has non-finite entries");
  const double scale = m.norm();
  const double skew = (m - m.adjoint()).norm();
  if (skew > kHermTol * std::max(scale, std::numeric_limits<double>::min()))
    throw DomainError("matrix is not Hermitian (|a - a*|_F = " + std::to_string(skew) + ")");
  return hermitian_part(m);
}

// ---------------------------------------------------------------------------
// UnitizedHermitian

UnitizedHermitian::UnitizedHermitian(double scalar, const Matrix& hs) : scalar_(scalar), hs_(hermitize_checked(hs)) {
  if (!std::isfinite(scalar)) throw DomainError("scalar coordinate is not finite");
  if (hs_.rows() < 1) throw DimensionError("dimension must be at least 1");
}

UnitizedHermitian UnitizedHermitian::zero(int n) { return hermitian_part_of(0.0, Matrix::Zero(n, n)); }

UnitizedHermitian UnitizedHermitian::identity(int n) { return hermitian_part_of(1.0, Matrix::Zero(n, n)); }

UnitizedHermitian UnitizedHermitian::from_matrix(const Matrix& m, double scalar) {
  return UnitizedHermitian(scalar, m - scalar * eye(static_cast<int>(m.rows())));
}

UnitizedHermitian UnitizedHermitian::hermitian_part_of(double scalar, const Matrix& hs) {
  UnitizedHermitian out;
  out.scalar_ = scalar;
  out.hs_ = hermitian_part(hs);
  return out;
}

Matrix UnitizedHermitian::materialize() const { return hs_ + scalar_ * eye(dim()); }

UnitizedHermitian& UnitizedHermitian::operator+=(const UnitizedHermitian& o) {
  check_same_dim(dim(), o.dim(), "add");
  scalar_ += o.scalar_;
  hs_ += o.hs_;
  return *this;
}

UnitizedHermitian& UnitizedHermitian::operator-=(const UnitizedHermitian& o) {
  check_same_dim(dim(), o.dim(), "subtract");
  scalar_ -= o.scalar_;
  hs_ -= o.hs_;
  return *this;
}

UnitizedHermitian& UnitizedHermitian::operator*=(double c) {
  scalar_ *= c;
  hs_ *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// UnitizedOperator

UnitizedOperator::UnitizedOperator(Complex scalar, Matrix mat) : scalar_(scalar), mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) throw DimensionError("operator matrix is not square");
  if (!all_finite(mat_) || !std::isfinite(scalar_.real()) || !std::isfinite(scalar_.imag()))
    throw DomainError("operator has non-finite entries");
}

UnitizedOperator::UnitizedOperator(const UnitizedHermitian& h) : scalar_(h.scalar()), mat_(h.hs()) {}

UnitizedOperator UnitizedOperator::identity(int n) { return {1.0, Matrix::Zero(n, n)}; }

UnitizedOperator UnitizedOperator::from_matrix(const Matrix& m, Complex scalar) {
  return {scalar, m - scalar * eye(static_cast<int>(m.rows()))};
}

Matrix UnitizedOperator::materialize() const { return mat_ + scalar_ * eye(dim()); }

UnitizedHermitian UnitizedOperator::hermitian() const {
  return UnitizedHermitian::hermitian_part_of(scalar_.real(), mat_);
}

UnitizedOperator& UnitizedOperator::operator+=(const UnitizedOperator& o) {
  check_same_dim(dim(), o.dim(), "add");
  scalar_ += o.scalar_;
  mat_ += o.mat_;
  return *this;
}

UnitizedOperator& UnitizedOperator::operator-=(const UnitizedOperator& o) {
  check_same_dim(dim(), o.dim(), "subtract");
  scalar_ -= o.scalar_;
  mat_ -= o.mat_;
  return *this;
}

UnitizedOperator& UnitizedOperator::operator*=(Complex c) {
  scalar_ *= c;
  mat_ *= c;
  return *this;
}

UnitizedOperator operator*(const UnitizedOperator& x, const UnitizedOperator& y) {
  check_same_dim(x.dim(), y.dim(), "multiply");
  Matrix m = x.scalar() * y.mat() + y.scalar() * x.mat();
  m.noalias() += x.mat() * y.mat();
  return {x.scalar() * y.scalar(), std::move(m)};
}

UnitizedOperator adjoint(const UnitizedOperator& x) { return {std::conj(x.scalar()), x.mat().adjoint()}; }

UnitizedOperator inverse(const UnitizedOperator& x) {
  if (std::abs(x.scalar()) == 0.0) throw SingularError("inverse: zero scalar coordinate");
  const Matrix m = x.materialize();
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-14 * sv(0)) throw SingularError("inverse: singular operator");
  const Complex s = 1.0 / x.scalar();
  return {s, m.partialPivLu().inverse() - s * eye(x.dim())};
}

UnitizedOperator commutator(const UnitizedOperator& x, const UnitizedOperator& y) {
  check_same_dim(x.dim(), y.dim(), "commutator");
  Matrix m = x.mat() * y.mat();
  m.noalias() -= y.mat() * x.mat();
  return {0.0, std::move(m)};
}

UnitizedHermitian congruence(const UnitizedHermitian& c, const UnitizedHermitian& x) {
  const UnitizedOperator cc(c);
  return (cc * UnitizedOperator(x) * cc).hermitian();
}

UnitizedHermitian congruence(const UnitizedOperator& g, const UnitizedHermitian& x) {
  return (g * UnitizedOperator(x) * adjoint(g)).hermitian();
}

// ---------------------------------------------------------------------------
// Inner products

double hs_inner(const UnitizedHermitian& x, const UnitizedHermitian& y) {
  check_same_dim(x.dim(), y.dim(), "hs_inner");
  // Re tr(a b) for Hermitian a, b is sum_ij Re(a_ij conj(b_ij)).
  const double tr = (x.hs().array() * y.hs().conjugate().array()).real().sum();
  return x.scalar() * y.scalar() + 4.0 * tr;
}

double hs_norm(const UnitizedHermitian& x) { return std::sqrt(std::max(0.0, hs_inner(x, x))); }

Complex op_inner(const UnitizedOperator& x, const UnitizedOperator& y) {
  check_same_dim(x.dim(), y.dim(), "op_inner");
  const Complex tr = (x.mat().array() * y.mat().conjugate().array()).sum();
  return x.scalar() * std::conj(y.scalar()) + 4.0 * tr;
}

double op_norm(const UnitizedOperator& x) { return std::sqrt(std::norm(x.scalar()) + 4.0 * x.mat().squaredNorm()); }

// ---------------------------------------------------------------------------
// Cone points and functional calculus

ConePoint::ConePoint(UnitizedHermitian op, Eigensystem es) : op_(std::move(op)), eig_(std::move(es)) {
  const double top = std::max(1.0, std::abs(eig_.values(eig_.values.size() - 1)));
  if (!(op_.scalar() > kPosTol * std::max(1.0, std::abs(op_.scalar()))))
    throw DomainError("cone point: scalar coordinate must be positive");
  if (!(eig_.values(0) > kPosTol * top)) throw DomainError("cone point: operator is not positive definite");
}

ConePoint::ConePoint(const UnitizedHermitian& op) : ConePoint(op, eig_hermitian(op.materialize())) {}

ConePoint ConePoint::identity(int n) { return ConePoint(UnitizedHermitian::identity(n)); }

ConePoint ConePoint::from_spectral(double scalar, Eigensystem es) {
  const int n = static_cast<int>(es.values.size());
  Matrix m = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  m -= scalar * eye(n);
  return ConePoint(UnitizedHermitian::hermitian_part_of(scalar, m), std::move(es));
}

double ConePoint::condition_number() const { return eig_.values(eig_.values.size() - 1) / eig_.values(0); }

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": function undefined on the spectrum");
  return v;
}

UnitizedHermitian apply_on(const Eigensystem& es, double scalar, const std::function<double(double)>& f) {
  const double fs = checked(f(scalar), "spd_apply");
  RealVector fv(es.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) fv(k) = checked(f(es.values(k)), "spd_apply");
  Matrix m = es.vectors * fv.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  m -= fs * Matrix::Identity(m.rows(), m.cols());
  return UnitizedHermitian::hermitian_part_of(fs, m);
}

ConePoint positive_apply(const Eigensystem& es, double scalar, const std::function<double(double)>& f) {
  Eigensystem out;
  out.values.resize(es.values.size());
  for (Eigen::Index k = 0; k < out.values.size(); ++k) out.values(k) = checked(f(es.values(k)), "spd_apply");
  // f is monotone for every caller except negative powers, which reverse order.
  out.vectors = es.vectors;
  if (out.values.size() > 1 && out.values(0) > out.values(out.values.size() - 1)) {
    out.values.reverseInPlace();
    out.vectors = es.vectors.rowwise().reverse();
  }
  return ConePoint::from_spectral(checked(f(scalar), "spd_apply"), std::move(out));
}

}  // namespace

UnitizedHermitian spd_apply(const ConePoint& p, const std::function<double(double)>& f) {
  return apply_on(p.eig(), p.scalar(), f);
}

UnitizedHermitian apply_function(const UnitizedHermitian& x, const std::function<double(double)>& f) {
  return apply_on(eig_hermitian(x.materialize()), x.scalar(), f);
}

UnitizedHermitian mat_log(const ConePoint& p) {
  return spd_apply(p, [](double v) { return std::log(v); });
}

ConePoint mat_exp(const UnitizedHermitian& x) {
  return positive_apply(eig_hermitian(x.materialize()), x.scalar(), [](double v) { return std::exp(v); });
}

ConePoint mat_pow(const ConePoint& p, double t) {
  if (t == 0.0) return ConePoint::identity(p.dim());
  return positive_apply(p.eig(), p.scalar(), [t](double v) { return std::pow(v, t); });
}

ConePoint mat_sqrt(const ConePoint& p) { return mat_pow(p, 0.5); }

ConePoint mat_inv(const ConePoint& p) { return mat_pow(p, -1.0); }

UnitizedHermitian frechet_exp(const UnitizedHermitian& x, const UnitizedHermitian& y) {
  check_same_dim(x.dim(), y.dim(), "frechet_exp");
  const int n = x.dim();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  const Matrix xm = x.materialize();
  block.topLeftCorner(n, n) = xm;
  block.bottomRightCorner(n, n) = xm;
  block.topRightCorner(n, n) = y.materialize();
  const Matrix e = block.exp();
  const double s = std::exp(x.scalar()) * y.scalar();
  Matrix hs = e.topRightCorner(n, n);
  hs -= s * Matrix::Identity(n, n);
  return UnitizedHermitian::hermitian_part_of(s, hs);
}

PolarFactors polar(const UnitizedOperator& g) {
  if (std::abs(g.scalar()) == 0.0) throw SingularError("polar: zero scalar coordinate");
  const UnitizedHermitian ggs = (g * adjoint(g)).hermitian();
  const Eigensystem es = eig_hermitian(ggs.materialize());
  if (es.values(0) <= 1e-14 * std::max(1.0, es.values(es.values.size() - 1)))
    throw SingularError("polar: operator is singular");
  const ConePoint gg = ConePoint::from_spectral(ggs.scalar(), es);
  ConePoint absval = mat_sqrt(gg);
  const UnitizedOperator inv_abs(mat_pow(gg, -0.5).op());
  return {std::move(absval), inv_abs * g};
}

double unitarity_defect(const UnitizedOperator& u) {
  const UnitizedOperator one = UnitizedOperator::identity(u.dim());
  return std::max(op_norm(u * adjoint(u) - one), op_norm(adjoint(u) * u - one));
}

}  // namespace spdcone
