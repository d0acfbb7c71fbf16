#pragma once

#include <stdexcept>
#include <string>

namespace geminal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A requested orbital pair is not contained in the configuration.
class PairNotPresentError : public InputError {
 public:
  using InputError::InputError;
};

/// Two geminal-basis objects were combined across different representations.
class BasisTagError : public Error {
 public:
  using Error::Error;
};

/// Matrix lacks a structure the operation requires (e.g. block diagonality).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds a configured limit, or an iterative method failed.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Degenerate spectrum where a simple one is required; raise epsilon.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Eigenvector tracking stayed ambiguous after the maximum refinement depth.
class GridResolutionError : public Error {
 public:
  using Error::Error;
};

/// A configuration's pairs are not covered by the scanned curves.
class CoverageError : public Error {
 public:
  using Error::Error;
};

}  // namespace geminal
