#pragma once

#include <stdexcept>
#include <string>

namespace regret {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration file or field (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (CLI exit code 2).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge or hit a boundary (CLI exit code 3).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A matrix was singular or indefinite where a PSD one was required.
class ConditioningError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Experiment-quality failure, e.g. too many failed replications (exit code 4).
class ExperimentError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a finite-sample bound is not satisfied by the instance.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The threshold t falls in a region not covered by any case of a bound.
class RegionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Requested combination of family / distribution / cost is not supported.
class NotImplementedError : public Error {
 public:
  using Error::Error;
};

}  // namespace regret
