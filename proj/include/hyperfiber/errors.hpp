#pragma once

#include <stdexcept>
#include <string>

namespace hyperfiber {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands live on different fiber models.
struct ModelMismatch : Error {
  using Error::Error;
};

/// Wrong form degree, or a non-homogeneous form where one degree is required.
struct DegreeError : Error {
  using Error::Error;
};

/// Wrong Hodge type for the requested operation.
struct TypeError : Error {
  using Error::Error;
};

/// A reality condition required as a precondition does not hold.
struct RealityError : Error {
  using Error::Error;
};

/// The covector dictionary violates the quaternion relations (e.g. under fault injection).
struct ConventionError : Error {
  using Error::Error;
};

/// An operation's documented precondition (e.g. Lambda Theta = 0) fails.
struct PreconditionError : Error {
  using Error::Error;
};

/// Invalid suite configuration; maps to CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hyperfiber
