#pragma once

#include <stdexcept>
#include <string>

namespace emogan {

// Base of every error thrown by the library. The CLI maps the concrete type
// to an exit code: UsageError -> 1, DataError (and subclasses) -> 2,
// NumericalError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, out-of-range parameters, inconsistent configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Anything wrong with input data: files, formats, shapes, labels.
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class DuplicateEmoticonError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateTargetError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyInputError : public DataError {
 public:
  using DataError::DataError;
};

// Gold label set violates the top-2 protocol (must hold 1 or 2 classes).
class ProtocolError : public DataError {
 public:
  using DataError::DataError;
};

// A loss or parameter became NaN/inf during training.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace emogan
