#pragma once

#include <stdexcept>
#include <string>

namespace gaborface {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: parameters, documents, tables, configuration.
/// The command-line tool maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A structured document (grid JSON, ratings CSV, PGM, ...) is malformed.
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfBoundsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Operands that cannot be combined: dimension, schema or bank mismatch.
class IncompatibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerically degenerate input (all-zero jet, constant series, collapsed configuration).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Filesystem and other environment failures (exit code 2 in the tool).
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace gaborface
