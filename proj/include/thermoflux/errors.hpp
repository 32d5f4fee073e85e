#ifndef THERMOFLUX_ERRORS_HPP
#define THERMOFLUX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thermoflux {

/// Violated precondition on user-supplied parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure of a root finder or quadrature (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivergentPartition : public ConfigError {
public:
  explicit DivergentPartition(double beta_a)
      : ConfigError("partition sum diverges: beta*a = " + std::to_string(beta_a) +
                    " must be > 0") {}
};

class DomainError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class OrderTooLarge : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class InsufficientSamples : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class DegeneratePoint : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class GridTooSmall : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class SingularTime : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NoBracket : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class IllConditioned : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace thermoflux

#endif  // THERMOFLUX_ERRORS_HPP
