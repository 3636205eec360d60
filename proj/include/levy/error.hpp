#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A family or operator parameter lies outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operator symbol vanishes on a lattice point, or an experiment violates
/// the admissibility inequality.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// Array sizes or coefficient layouts do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Too few usable points for a regression.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace levy
