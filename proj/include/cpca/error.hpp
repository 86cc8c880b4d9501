#pragma once

#include <stdexcept>
#include <string>

namespace cpca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is out of range or inconsistent with the data (k >= n, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural requirement (malformed CSV, NaN, empty set,
/// dimension mismatch, duplicate points where distinct ones are required).
class DataError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced a result outside its contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpca
