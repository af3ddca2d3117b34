#pragma once

#include <stdexcept>
#include <string>

namespace autocat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValidationCode {
  kDimension,
  kDimensionMismatch,
  kNonPositiveInflow,
  kNonPositiveOutflow,
  kNegativeKappa,
  kNonzeroDiagonal,
  kTopologyPattern,
  kNonPositiveVolume,
  kInvalidState,
};

/// Rejected network parameters or states. `code()` tells the cases apart.
class ValidationError : public Error {
 public:
  ValidationError(ValidationCode code, const std::string& what)
      : Error(what), code_(code) {}
  ValidationCode code() const noexcept { return code_; }

 private:
  ValidationCode code_;
};

/// A closed-form operation was called on a network that does not
/// satisfy its hypotheses (unequal outflows, wrong topology, ...).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula (state off the simplex,
/// index out of range, a_i = 0 where a_i >= 1 is needed).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A resource guard tripped: event cap in the simulator or state-count cap
/// in the truncated solver.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

class EmptySliceError : public Error {
 public:
  using Error::Error;
};

class UndersizedEnsembleError : public Error {
 public:
  using Error::Error;
};

/// Malformed network configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace autocat
