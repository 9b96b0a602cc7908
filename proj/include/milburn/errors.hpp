#pragma once

#include <stdexcept>
#include <string>

namespace milburn {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (bad parameter, non-physical covariance).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Coupling at or beyond the stability boundary J < omega1 * omega2.
class InstabilityError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Negative occupation read off a covariance matrix.
class NegativeOccupationError : public DomainError {
  public:
    using DomainError::DomainError;
};

class UnknownPresetError : public Error {
  public:
    using Error::Error;
};

}  // namespace milburn

namespace milburn {

/// File-system or stream failure.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace milburn
