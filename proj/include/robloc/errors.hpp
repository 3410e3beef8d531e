#pragma once

#include <stdexcept>
#include <string>

namespace robloc {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input data (ragged CSV, non-finite values, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Data violates general position where an operation requires it.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// An estimator cannot be evaluated on the given data, or is unknown.
class EstimatorError : public Error {
 public:
  using Error::Error;
};

}  // namespace robloc
