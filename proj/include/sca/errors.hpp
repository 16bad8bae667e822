#pragma once

#include <stdexcept>

namespace sca {

/// Base class for all solver and validation failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Bisection endpoints do not bracket a root.
class NoBracket : public Error {
 public:
  using Error::Error;
};

/// A user-supplied oracle produced NaN.
class InvalidFunctionValue : public Error {
 public:
  using Error::Error;
};

class NotDescentDirection : public Error {
 public:
  using Error::Error;
};

/// Backtracking exceeded its trial cap.
class LineSearchStalled : public Error {
 public:
  using Error::Error;
};

class SubproblemInfeasible : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// A data matrix has an all-zero column.
class DegenerateColumn : public Error {
 public:
  using Error::Error;
};

}  // namespace sca
