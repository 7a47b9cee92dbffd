#pragma once

#include <stdexcept>
#include <string>

namespace htkm {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or argument values (bad K, malformed grid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problems with input data: unreadable files, malformed cells, shape
/// mismatches, degenerate inputs.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class ShapeError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateDataError : public DataError {
 public:
  using DataError::DataError;
};

/// A caller broke an internal contract (e.g. empty cluster passed to a
/// center update). Indicates a bug in the calling code, not bad data.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Numerical failure that cannot be attributed to the input shape.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace htkm
