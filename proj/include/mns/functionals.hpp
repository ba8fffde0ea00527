#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "mns/state.hpp"
#include "mns/thermo.hpp"

namespace mns {

/// delta F / delta psi for the three field slots. The convention is the
/// node gradient of the discrete value divided by the cell volume, so that
///   F[psi + eps dpsi] - F[psi] = eps * integrate(dF/dpsi * dpsi) + O(eps^2).
struct FunctionalDerivative {
  VectorField v;
  ScalarField rho;
  ScalarField s;
};

/// A functional of the fluid state together with its exact discrete
/// derivative. Derivatives are derived analytically per functional (not by
/// AD) so the bracket degeneracy identities hold to roundoff; the
/// finite-difference audit in the test suite guards the derivations.
struct Functional {
  std::string label;
  std::function<double(const FluidState&)> value;
  std::function<FunctionalDerivative(const FluidState&)> derivative;
};

/// Smooth profile f(s) with its derivative; f_prime is validated against
/// finite differences of f at construction.
struct EntropyProfile {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::string description;

  static EntropyProfile linear(double slope);
  /// f(s) = sum_i coeffs[i] s^i, degree <= 4.
  static EntropyProfile polynomial(const std::vector<double>& coeffs);
  static EntropyProfile custom(std::function<double(double)> f,
                               std::function<double(double)> f_prime,
                               std::string description);
};

/// Total energy: integral of rho |v|^2 / 2 + rho U(rho, s).
Functional hamiltonian(const EquationOfState& eos);

/// Total mass: integral of rho.
Functional mass();

/// Momentum component j: integral of rho v_j.
Functional momentum(int j);
std::array<Functional, 3> momentum();

/// Generalized entropy: integral of rho f(s).
Functional generalized_entropy(const EntropyProfile& profile);

/// Free energy: hamiltonian + generalized entropy.
Functional free_energy(const EquationOfState& eos,
                       const EntropyProfile& profile);

/// a*F + b*G with the derivative assembled exactly from the parts.
Functional linear_combination(double a, const Functional& F, double b,
                              const Functional& G);

/// Seed-deterministic quadrature of a random degree-<=2 polynomial in
/// (v, rho, s) and their first differences, with smooth random coefficient
/// fields. The derivative uses the discrete Euler-Lagrange rule (pointwise
/// term minus adjoint difference of the derivative-slot term), which is the
/// exact node gradient. The draw does not depend on the grid, so one seed
/// names the same continuum functional at every resolution.
Functional random_test_functional(std::uint64_t seed);

/// integrate(d.v * t.v + d.rho * t.rho + d.s * t.s)
double pair(const FunctionalDerivative& d, const Tendency& t);

}  // namespace mns
