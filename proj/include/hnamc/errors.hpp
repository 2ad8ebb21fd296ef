#pragma once

#include <stdexcept>
#include <string>

namespace hnamc {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formula has free trace variables where a closed one is required.
class OpenFormulaError : public Error {
 public:
  using Error::Error;
};

/// Operands disagree on variables or domain, or a name is not in the variable set.
class VarMismatchError : public Error {
 public:
  using Error::Error;
};

class NotDeterministicError : public Error {
 public:
  using Error::Error;
};

class NotCompleteError : public Error {
 public:
  using Error::Error;
};

class NonInjectiveError : public Error {
 public:
  using Error::Error;
};

/// Components of an asynchronous product share a variable.
class VarOverlapError : public Error {
 public:
  using Error::Error;
};

/// An atom refers to a coordinate x_pi that the composed variable set lacks.
class CoordinateMissingError : public Error {
 public:
  using Error::Error;
};

class UnknownActionError : public Error {
 public:
  using Error::Error;
};

/// Structural invariant violated while building a domain object.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace hnamc
