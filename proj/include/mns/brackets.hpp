#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mns/functionals.hpp"
#include "mns/state.hpp"
#include "mns/thermo.hpp"

namespace mns {

/// Fields cached for bracket evaluations over one fluid state: thermodynamic
/// closures, velocity gradients, vorticity and the viscous stress, plus the
/// transport coefficients frozen on the cached (p, T). Construction aborts
/// with a diagnostic if density or temperature is nonpositive anywhere.
struct BracketContext {
  FluidState state;
  EquationOfState eos;
  TransportCoefficients coeffs;

  ScalarField p;
  ScalarField T;
  ScalarField rho_T;    // rho * T, the divisor used by the entropy slot
  ScalarField inv_rho;
  ScalarField eta;      // evaluated coefficient fields
  ScalarField zeta;
  ScalarField kappa;    // scalar mode only
  std::array<std::array<ScalarField, 3>, 3> dv;  // dv[a][b] = D_a v_b
  ScalarField div_v;
  VectorField omega;    // curl v
  VectorField grad_s;
  SymTensorField sigma;
  std::uint64_t state_version = 0;

  const Grid& grid() const { return state.grid(); }
};

BracketContext make_context(const FluidState& state,
                            const EquationOfState& eos,
                            const TransportCoefficients& coeffs);

// ---- antisymmetric bracket ---------------------------------------------------

/// Precomputed F-slot data for the antisymmetric bracket.
struct PoissonSlot {
  FunctionalDerivative d;
  ScalarField div_dv;
  VectorField grad_drho;
};

PoissonSlot make_poisson_slot(const BracketContext& ctx, const Functional& F);

/// The generalized Poisson bracket of the ideal fluid:
///   {F,G} = -int( F_rho div G_v + F_v . grad G_rho
///                 + F_v . ((curl v / rho) x G_v)
///                 + (grad s / rho) . (F_s G_v - F_v G_s) ).
double poisson_bracket(const BracketContext& ctx, const PoissonSlot& F,
                       const PoissonSlot& G);
double poisson_bracket(const BracketContext& ctx, const Functional& F,
                       const Functional& G);

/// Tendency psi_dot = {psi, G}: since no derivative acts on the F slot, the
/// strong form reads off the integrand. The weak-form identity
/// integrate(F_psi . poisson_rhs(G)) = {F,G} holds to roundoff.
Tendency poisson_rhs(const BracketContext& ctx, const PoissonSlot& G);
Tendency poisson_rhs(const BracketContext& ctx, const Functional& G);

/// Magnitude of the terms that had to cancel: the same quadrature with every
/// pointwise product replaced by its absolute value. Used to normalize
/// antisymmetry and Casimir defects.
double poisson_bracket_gross(const BracketContext& ctx, const PoissonSlot& F,
                             const PoissonSlot& G);

// ---- symmetric (metric) bracket ----------------------------------------------

/// Precomputed F-slot data for the symmetric bracket:
///   u_k = F_{v_k}/rho,  r = F_s/(rho T),
///   A_ik = D_i u_k - (D_k v_i) r,
/// stored as the traceless symmetric part `dev`, trace `tr`, and the
/// gradient `dr` of r.
struct MetricSlot {
  FunctionalDerivative d;
  std::array<ScalarField, 3> u;
  ScalarField r;
  std::array<std::array<ScalarField, 3>, 3> X;  // X[i][k] = D_i u_k
  std::array<ScalarField, 6> dev;               // xx,yy,zz,xy,xz,yz
  ScalarField tr;
  std::array<ScalarField, 3> dr;
};

MetricSlot make_metric_slot(const BracketContext& ctx, const Functional& F);

/// Symmetric dissipative bracket, canonical evaluation:
///   (F,G) = (1/lambda) int( T [ 2 eta devA_F : devA_G + zeta trA_F trA_G ]
///                           + kappa T^2 grad r_F . grad r_G ).
/// The quadratic form in A is the viscosity-tensor contraction reduced to
/// its definite normal form, so (F,G) is bitwise symmetric in F<->G and
/// (F,F) is exactly nonnegative. Tensor conductivity replaces the last term
/// by the symmetric kappa_ij pairing.
double metric_bracket(const BracketContext& ctx, const MetricSlot& F,
                      const MetricSlot& G);
double metric_bracket(const BracketContext& ctx, const Functional& F,
                      const Functional& G);

/// Cross-check form: same bracket with the literal 81-entry viscosity-tensor
/// contraction per node. Agrees with the canonical form to roundoff.
double metric_bracket_tensor_form(const BracketContext& ctx,
                                  const MetricSlot& F, const MetricSlot& G);

/// Cross-check form: the original five-term stress-flux writing of the
/// bracket. Connected to the canonical form only by exact summation-by-parts
/// and pointwise identities, so agreement is roundoff, not O(h^2).
double metric_bracket_stress_form(const BracketContext& ctx,
                                  const MetricSlot& F, const MetricSlot& G);

/// Gross magnitude scale for the symmetric bracket (envelope of the
/// cancelling terms).
double metric_bracket_gross(const BracketContext& ctx, const MetricSlot& F,
                            const MetricSlot& G);

/// The exact discrete adjoint of metric_bracket in its F slot:
/// integrate(F_psi . metric_rhs(G)) = (F,G) for every functional F.
/// The density tendency is identically zero.
Tendency metric_rhs(const BracketContext& ctx, const MetricSlot& G);
Tendency metric_rhs(const BracketContext& ctx, const Functional& G);

/// Test-harness entry that evaluates the conductivity pairing with an
/// arbitrary (possibly asymmetric) tensor kappa, bypassing the constructor
/// validation; used to verify that the bracket-symmetry defect is linear in
/// the antisymmetric part of kappa.
double metric_bracket_with_tensor_kappa_unchecked(const BracketContext& ctx,
                                                  const MetricSlot& F,
                                                  const MetricSlot& G,
                                                  const Mat3& kappa);

// ---- combined bracket ---------------------------------------------------------

/// {{F,G}} = {F,G} + (F,G).
double full_bracket(const BracketContext& ctx, const Functional& F,
                    const Functional& G);

enum class DissipationPath {
  entropy,      // psi_dot = {psi, H} + (psi, S_f)
  free_energy,  // psi_dot = {psi, H} + (psi, F); equal by energy degeneracy
};

Tendency full_rhs(const BracketContext& ctx, const EntropyProfile& profile,
                  DissipationPath path = DissipationPath::entropy);

// ---- degeneracy report --------------------------------------------------------

struct DegeneracyRow {
  std::string identity;
  int n_samples = 0;
  double max_normalized_defect = 0.0;
  bool pass = false;
};

struct DegeneracyReport {
  std::vector<DegeneracyRow> rows;
  double threshold = 1e-11;
  bool all_pass() const;
  void write_csv(std::ostream& os) const;
};

/// Max normalized defect of (H,G), (P_j,G), {M,G}, {S_f,G} over n random
/// test functionals G; rows exceeding 1e-11 are flagged.
DegeneracyReport degeneracy_report(const BracketContext& ctx,
                                   const EntropyProfile& profile,
                                   int n_samples, std::uint64_t seed);

}  // namespace mns
