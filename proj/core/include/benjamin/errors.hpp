#pragma once

#include <stdexcept>
#include <string>

namespace benjamin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Refinement test on an operator quadrature did not settle.
class QuadratureTooCoarse : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization failed or the operator is numerically singular.
class SingularOperator : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// Picard iteration for the nonlinear control stopped contracting.
class NoContraction : public Error {
 public:
  using Error::Error;
};

class DegenerateFrequencies : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroNorm : public Error {
 public:
  using Error::Error;
};

class NonPositiveNorm : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or CLI input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace benjamin
