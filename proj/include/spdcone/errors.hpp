#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spdcone {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of an operation (non-Hermitian input,
/// logarithm of a non-positive operator, non-normal vector, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inversion of a singular operator.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Linearly dependent input where independence is required.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Sample index on the boundary of a finite-difference stencil.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Malformed request (unknown suite, bad descriptor).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of iterations. Carries the best iterate
/// in pair form so callers can inspect or restart from it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_scalar,
                   Eigen::MatrixXcd best_hs, double residual, int iterations)
      : Error(what),
        best_scalar(best_scalar),
        best_hs(std::move(best_hs)),
        residual(residual),
        iterations(iterations) {}

  double best_scalar;
  Eigen::MatrixXcd best_hs;
  double residual;
  int iterations;
};

}  // namespace spdcone
