#pragma once

#include <stdexcept>
#include <string>

namespace wordbias {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: bad parameter values, missing files, conflicting
/// word lists. Maps to CLI exit code 2.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Malformed or unusable input data: parse failures, missing tokens,
/// degenerate vectors. Maps to CLI exit code 3.
class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(what) {}
};

/// A guaranteed internal invariant failed to hold. Maps to CLI exit code 4.
class InternalError : public Error {
public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace wordbias
