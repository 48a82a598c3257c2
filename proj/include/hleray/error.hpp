#pragma once

#include <stdexcept>
#include <string>

namespace hleray {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on dimensions, indices or parameters was violated.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A sphere expansion left a residual above the requested tolerance, or a
/// quadrature grid is too coarse for the requested basis.
class TruncationError : public Error {
public:
  using Error::Error;
};

/// A radial profile does not vanish on the outer part of its grid.
class SupportError : public Error {
public:
  using Error::Error;
};

/// A field failed a structural check (solenoidality, toroidality, zero mean).
class FieldError : public Error {
public:
  using Error::Error;
};

/// The requested construction is not available for this (N, gamma).
class RegimeError : public Error {
public:
  using Error::Error;
};

/// An exponential factor would overflow binary64.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// Malformed field file or report.
class FormatError : public Error {
public:
  using Error::Error;
};

} // namespace hleray
