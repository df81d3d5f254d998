#pragma once

#include <stdexcept>
#include <string>

namespace lzsim {

/// Argument outside the mathematical domain of a function (non-finite x,
/// nonpositive dephasing rate, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Caller-supplied numerical parameter rejected (e.g. an unstable step size).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A solve produced no trustworthy answer.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The rate matrix has a stationary space of dimension > 1 (or is zero).
class DisconnectedChainError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Every cell of a sweep failed.
class SweepError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace lzsim
