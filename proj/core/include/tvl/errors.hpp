#pragma once

#include <stdexcept>
#include <string>

namespace tvl {

// Base class for failures of an inner numerical procedure (solver did not
// converge, matrix became singular, ...). The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sigma_min(J(x)) fell below the LICQ threshold.
class SingularConstraintError : public NumericalError {
 public:
  SingularConstraintError(double sigma_min, double threshold);
  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

class StepSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ImplicitSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RootBracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MissingHessianError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Starting point is not a KKT point of the problem at t = 0.
class InitializationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tvl
