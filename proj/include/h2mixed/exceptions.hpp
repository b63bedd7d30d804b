#pragma once

#include <stdexcept>
#include <string>

namespace h2mixed {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A coefficient / boundary-class combination for which the discrete problem is not well posed.
class InadmissibleProblem : public Error {
public:
  using Error::Error;
};

/// Raised by the linear solvers (singular factorization, Krylov breakdown, ...).
class SolverError : public Error {
public:
  using Error::Error;
};

} // namespace h2mixed
