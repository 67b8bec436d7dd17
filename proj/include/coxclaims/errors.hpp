#pragma once

#include <stdexcept>

namespace coxclaims {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model input: bad matrix rows, invalid shapes, unknown delay family.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (off-grid valuation, a > b, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Chain is reducible or periodic where a limiting law is required.
class UnsupportedChainError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Spectrum is complex or has (near-)repeated eigenvalues; use the direct
// covariance path instead.
class SpectralUnsupportedError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A modelling assumption required by the operation does not hold
// (e.g. non-normalized period exposure for the stationary ACF).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Conditioning on a zero-probability event (P_U(tau - t) = 0 or 1).
class DegenerateConditioningError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A truncated series could not meet the requested tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace coxclaims
