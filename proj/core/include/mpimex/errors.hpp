#pragma once

#include <stdexcept>
#include <string>

namespace mpimex {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller passed malformed data (dimension mismatch, unknown identifier, ...).
struct RejectedInput : Error {
  using Error::Error;
};

// A precondition that callers must establish was violated.
struct ContractViolation : Error {
  using Error::Error;
};

// Exactly singular pivot encountered in a direct solve.
struct SingularMatrix : Error {
  using Error::Error;
};

// Iteration did not converge or produced non-finite values.
struct NumericFailure : Error {
  using Error::Error;
};

// Closed-form expression evaluated at a pole.
struct SingularParameter : Error {
  using Error::Error;
};

// Physical state left its admissible set (nonpositive density/pressure).
struct StateValidity : Error {
  using Error::Error;
};

// Mesh map lost monotonicity (cell metric g <= 0).
struct MeshTangling : Error {
  using Error::Error;
};

// Newton iteration failed inside one implicit stage solve.
struct NewtonFailure : Error {
  NewtonFailure(const std::string& what, int subsystem_, int stage_, double residual_)
      : Error(what), subsystem(subsystem_), stage(stage_), residual(residual_) {}
  int subsystem = -1;
  int stage = -1;
  double residual = 0.0;
};

// A time step could not be completed; identifies where.
struct StepFailure : Error {
  StepFailure(const std::string& what, int step_, int subsystem_, int stage_, double residual_)
      : Error(what), step(step_), subsystem(subsystem_), stage(stage_), residual(residual_) {}
  int step = -1;
  int subsystem = -1;
  int stage = -1;
  double residual = 0.0;
};

}  // namespace mpimex
