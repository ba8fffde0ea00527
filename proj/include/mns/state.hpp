#pragma once

#include <cstdint>
#include <stdexcept>

#include "mns/field.hpp"

namespace mns {

/// Raised when a state or bracket evaluation hits nonpositive density or
/// temperature, or a non-finite value; evaluation aborts rather than
/// producing NaNs.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Velocity, mass density and specific entropy on a periodic grid.
struct FluidState {
  VectorField v;
  ScalarField rho;
  ScalarField s;
  std::uint64_t version = 0;

  const Grid& grid() const { return rho.grid(); }
  void bump() { ++version; }
};

FluidState make_uniform_state(const Grid& g, double rho0, double s0);

/// Checks rho > 0 and all fields finite; throws NumericalError naming the
/// first offending node.
void validate_state(const FluidState& state);

/// Per-field increments; also the shape of a functional derivative.
struct Tendency {
  VectorField v;
  ScalarField rho;
  ScalarField s;
};

Tendency zero_tendency(const Grid& g);

/// state + c * tendency (new state, version bumped past `state`).
FluidState axpy(const FluidState& state, double c, const Tendency& t);

}  // namespace mns
