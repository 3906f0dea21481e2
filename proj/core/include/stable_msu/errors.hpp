#pragma once

#include <stdexcept>
#include <string>

namespace stable_msu {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a pole (Gamma at a nonpositive integer, the tail coefficient at 1/2).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A documented precondition of a constructive result does not hold
/// (e.g. n <= 2p for the Beta/Gamma product of Z_{p/n}^{-p}).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integral that does not converge at the requested point.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace stable_msu
