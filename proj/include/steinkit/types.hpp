#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace steinkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Outcome of a tolerance-aware decision. `marginal` flags results inside the
/// tolerance band, where an open set and its closure cannot be told apart in
/// floating point.
enum class Verdict { yes, no, marginal };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    case Verdict::marginal:
      return "marginal";
  }
  return "invalid";
}

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input matrix contains NaN or infinite entries.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Dimensions do not match what the operation requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be Hermitian is not, beyond tolerance.
class NotHermitianError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive semidefinite is not.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive definite is not.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// A single matrix expected to have orthonormal columns does not.
class NotIsometryError : public Error {
 public:
  using Error::Error;
};

/// An isometry tuple fails its defining sum-to-identity property.
class InvalidIsometryError : public Error {
 public:
  using Error::Error;
};

/// A verified precondition of the operation does not hold for the inputs.
class PreconditionFailedError : public Error {
 public:
  using Error::Error;
};

/// Witness construction requires a matrix strictly outside the unit ball.
class NotOutsideError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point is too close to a pole of the transfer function.
class NearPoleError : public Error {
 public:
  NearPoleError(const std::string& what, Complex pole) : Error(what), pole(pole) {}
  Complex pole;
};

/// The state matrix is not (strictly) stable, so the requested fixed-point
/// computation is ill-posed.
class UnstableError : public Error {
 public:
  using Error::Error;
};

/// An index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter lies outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON or text input.
class JsonParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace steinkit
