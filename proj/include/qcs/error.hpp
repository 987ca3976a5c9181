#pragma once

#include <stdexcept>
#include <string>

namespace qcs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON syntax, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleMachineError : public Error {
 public:
  using Error::Error;
};

class MixedPeriodError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingArtifactError : public Error {
 public:
  using Error::Error;
};

class SchemaMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcs
