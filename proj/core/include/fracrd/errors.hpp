#pragma once

#include <stdexcept>
#include <string>

namespace fracrd {

/// Invalid or inconsistent user-facing configuration: unknown names,
/// out-of-range parameters, malformed config text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// API misuse detected at a precondition check (grid mismatch, bad index).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Base class for runtime failures of the numerical solvers.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Damped Newton failed to reduce the residual below tolerance.
class NewtonDivergence : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// A state exceeded the configured sup-norm cap during time stepping.
class BlowUp : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// Tridiagonal elimination met a pivot indistinguishable from zero.
class SingularOperator : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// Initial state violates the Dirichlet data at t = 0.
class InitialDataMismatch : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// Step-size search exhausted every damping level without progress.
class StepsizeFailure : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// The observation determinant is clamped on too large a node fraction
/// for a pointwise reconstruction to be meaningful.
class DegenerateObservations : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracrd
