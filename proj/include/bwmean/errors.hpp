#pragma once

#include <stdexcept>
#include <string>

namespace bwm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar function or constructor was applied outside its domain
/// (log of a nonpositive eigenvalue, non-SPD matrix, t outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Jacobi eigensolver ran out of sweeps.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double off_diagonal_residual)
      : Error(what), residual_(off_diagonal_residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A mean solver produced an intermediate that is not SPD.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem file or CLI input. The message carries the location.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace bwm
