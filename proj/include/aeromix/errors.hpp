#pragma once

#include <stdexcept>

namespace aeromix {

// Error taxonomy. Precondition violations on plain arguments throw
// std::invalid_argument directly; the types below mark failures that
// callers may reasonably want to catch separately.

// A mesh element with non-positive area was handed to an element routine.
struct SingularElement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A local contribution referenced a dof outside the global system.
struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two Dirichlet constraints on the same dof disagree.
struct ConstraintConflict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The linear solver could not factor the matrix or the computed solution
// failed the residual check.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton ran out of iterations before the residual tolerance was met.
struct NewtonFailure : SolverFailure {
  using SolverFailure::SolverFailure;
};

// A state vector carries NaN/Inf entries or has the wrong size for its mesh.
struct InvalidState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sample point lies outside the mesh.
struct InvalidProbe : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An output file could not be created or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aeromix
