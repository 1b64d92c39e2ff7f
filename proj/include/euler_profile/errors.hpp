#pragma once

#include <stdexcept>
#include <string>

namespace euler_profile {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad argument values: zero-length segments, r outside [0,h], n < 2, ...
class InvalidInput : public Error {
public:
  using Error::Error;
};

// Arguments outside the domain of a function (Ψ/Φ outside the triangle,
// Params violating 0 < L < a·h, non-monotone grid functions).
class DomainError : public Error {
public:
  using Error::Error;
};

// Parameters fall outside the regime an operation is defined for.
class RegimeError : public Error {
public:
  using Error::Error;
};

// Polyline cannot be converted to a graph on [0,a].
class ConversionError : public Error {
public:
  using Error::Error;
};

// A user-supplied vertex list violates the nonunique-family rules.
class InvalidSpec : public Error {
public:
  using Error::Error;
};

// No ξ in [0, η] reaches the target area for this η.
class InfeasibleEta : public Error {
public:
  using Error::Error;
};

// The hypocycloid needs ξ < η.
class DegenerateError : public Error {
public:
  using Error::Error;
};

// Operation is undefined for the profile's regime.
class NotApplicable : public Error {
public:
  using Error::Error;
};

// File input/output failure.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace euler_profile
