#include "mns/state.hpp"

#include <cmath>
#include <string>

namespace mns {

FluidState make_uniform_state(const Grid& g, double rho0, double s0) {
  FluidState st;
  st.v = VectorField(g);
  st.rho = ScalarField(g, rho0);
  st.s = ScalarField(g, s0);
  return st;
}

void validate_state(const FluidState& state) {
  const auto rho = state.rho.data();
  for (std::size_t n = 0; n < rho.size(); ++n) {
    if (!(rho[n] > 0.0))
      throw NumericalError("state: nonpositive density at node " +
                           std::to_string(n) + " (rho=" +
                           std::to_string(rho[n]) + ")");
  }
  if (!all_finite(state.v) || !all_finite(state.rho) || !all_finite(state.s))
    throw NumericalError("state: non-finite field value");
}

Tendency zero_tendency(const Grid& g) {
  return Tendency{VectorField(g), ScalarField(g), ScalarField(g)};
}

FluidState axpy(const FluidState& state, double c, const Tendency& t) {
  FluidState out;
  auto fma = [c](double x, double dx) { return x + c * dx; };
  out.rho = combine(fma, state.rho, t.rho);
  out.s = combine(fma, state.s, t.s);
  out.v = VectorField(state.grid());
  for (int a = 0; a < 3; ++a) out.v[a] = combine(fma, state.v[a], t.v[a]);
  out.version = state.version + 1;
  return out;
}

}  // namespace mns
