#pragma once

#include <stdexcept>
#include <string>

namespace mubkit {

// Base of everything the library throws on contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class NotPrimeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Raised when a supposedly commuting family fails to commute, or when its
// joint eigenspaces cannot be split down to one dimension.
class InconsistentClassError : public Error {
 public:
  using Error::Error;
};

class ConstructionFailedError : public Error {
 public:
  using Error::Error;
};

}  // namespace mubkit
