#pragma once

#include <stdexcept>
#include <string>

namespace entspec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (z <= 0 in
/// log_gamma, q <= 1/2 on the critical lines, alpha < 1 with fractional q).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A phase point handed to the solver of a different phase, a u beyond ln N,
/// or a separable point without N.
class PhaseError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed to converge (root finder, Newton, eigensolver).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or series did not reach the requested tolerance.
class AccuracyError : public NumericalError {
 public:
  AccuracyError(const std::string& what, double residual)
      : NumericalError(what + " (residual estimate " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace entspec
