#pragma once

#include <stdexcept>
#include <string>

namespace lpalex {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The radial points span a proper subspace; the hull has empty interior.
class DegenerateHull : public Error {
 public:
  using Error::Error;
};

class DimensionUnsupported : public Error {
 public:
  explicit DimensionUnsupported(int n)
      : Error("dimension " + std::to_string(n) + " is not supported (expected 2 or 3)") {}
};

class InvalidP : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

/// The measure is concentrated on a great subsphere.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class EmptyCurvature : public Error {
 public:
  using Error::Error;
};

class SpanningViolated : public Error {
 public:
  using Error::Error;
};

class InadmissibleT : public Error {
 public:
  using Error::Error;
};

/// Precondition violation on a library call (sizes, signs, ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpalex
