#pragma once

#include <stdexcept>
#include <string>

namespace dnc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by its caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Coefficient data (a, l, f) does not satisfy the structural assumptions.
class CoefficientError : public Error {
 public:
  using Error::Error;
};

class WeakDegeneracyViolated : public CoefficientError {
 public:
  explicit WeakDegeneracyViolated(double k_hat)
      : CoefficientError("x a'(x) <= K a(x) fails with K < 1: sampled K = " +
                         std::to_string(k_hat)),
        k_hat_(k_hat) {}
  double k_hat() const noexcept { return k_hat_; }

 private:
  double k_hat_;
};

class NonMonotone : public CoefficientError {
 public:
  using CoefficientError::CoefficientError;
};

class NotVanishing : public CoefficientError {
 public:
  using CoefficientError::CoefficientError;
};

class UnboundedDerivative : public CoefficientError {
 public:
  using CoefficientError::CoefficientError;
};

/// Numerical failure inside a solver.
class SolverError : public Error {
 public:
  using Error::Error;
};

class PicardDivergence : public SolverError {
 public:
  using SolverError::SolverError;
};

class NewtonDivergence : public SolverError {
 public:
  using SolverError::SolverError;
};

class SourceWeightDivergence : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Raised by inequality checks whose right-hand side vanishes.
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class AdmissibilityFail : public Error {
 public:
  using Error::Error;
};

}  // namespace dnc
