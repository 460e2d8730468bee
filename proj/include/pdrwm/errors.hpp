#pragma once

#include <stdexcept>
#include <string>

namespace pdrwm {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation received a parameter outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point was evaluated where the operation is undefined (e.g. a chain
/// state outside the target support).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Runtime evaluation failed a contract (off-simplex weights, unnormalised
/// weight function, evaluation outside support).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Regional covariance tests matched zero or several regions.
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// Factorisation, eigen-solver or quadrature failure.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The discretised transition matrix cannot be assembled at the requested
/// resolution.
class DiscretizationError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration is unresolvable.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdrwm
