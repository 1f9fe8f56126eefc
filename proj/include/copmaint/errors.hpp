#pragma once

#include <stdexcept>
#include <string>

namespace copmaint {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (negative time, u outside [0,1]).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Model parameter outside its admissible range.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Evaluation at a point where the function is singular.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// A ratio whose denominator vanishes.
class DivisionError : public Error {
public:
  using Error::Error;
};

/// Copula derivative requested on the boundary of the unit cube.
class BoundaryError : public Error {
public:
  using Error::Error;
};

/// Copula derivative requested inside the zero region of a Clayton copula.
class RegionError : public Error {
public:
  using Error::Error;
};

/// Quadrature or iteration that did not converge.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Requested operation is not supported for this model (e.g. no sampler).
class CapabilityError : public Error {
public:
  using Error::Error;
};

/// The age-policy cost rate has no interior minimum on the search range.
class NoInteriorOptimum : public Error {
public:
  enum class Boundary { DecreasingToInfinity, IncreasingFromZero, Flat };

  NoInteriorOptimum(const std::string& what, Boundary b) : Error(what), boundary_(b) {}
  Boundary boundary() const noexcept { return boundary_; }

private:
  Boundary boundary_;
};

/// The periodic-policy search hit its period cap without finding K*.
class NoFiniteOptimum : public Error {
public:
  using Error::Error;
};

}  // namespace copmaint
