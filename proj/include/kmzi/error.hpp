#pragma once

#include <stdexcept>
#include <string>

namespace kmzi {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// d<I_D>/dphi vanishes at the evaluation point, so the error-propagation
/// estimate of the phase uncertainty does not exist.
class SensitivityUndefined : public Error {
 public:
  using Error::Error;
};

/// An analytic result violates a property it must satisfy (reality,
/// positivity, nonnegative variance).
class FormulaInconsistency : public Error {
 public:
  using Error::Error;
};

/// A numerically computed quantity that must be real has a significant
/// imaginary part.
class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

/// The Fock-space truncation could not be made to hold the state.
class NonConverged : public Error {
 public:
  using Error::Error;
};

/// The input carries no photons inside the interferometer.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

}  // namespace kmzi
