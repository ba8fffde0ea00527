#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mns/brackets.hpp"
#include "mns/config.hpp"
#include "mns/dynamics.hpp"

namespace mns::checks {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// Antisymmetry of the Poisson bracket and bitwise symmetry of the metric
/// bracket over random functional pairs.
struct BracketAlgebraResult {
  double max_antisym_defect = 0.0;   // |{F,G}+{G,F}| / gross scale
  double max_self_defect = 0.0;      // |{F,F}| / gross scale
  bool metric_bitwise_symmetric = true;
};
BracketAlgebraResult bracket_algebra(const BracketContext& ctx, int n_pairs,
                                     std::uint64_t seed);

/// min over F of lambda * (F,F), raw and normalized by the gross scale.
/// The canonical evaluation keeps every pointwise contribution nonnegative,
/// so the raw minimum should be exactly >= 0.
struct DefinitenessResult {
  double min_value = 0.0;
  double min_normalized = 0.0;
};
DefinitenessResult definiteness(const BracketContext& ctx, int n_random,
                                std::uint64_t seed,
                                std::span<const EntropyProfile> profiles);

/// Casimir defect of {S_f, G} under 3D grid refinement N = 8, 16, 32 with a
/// resolution-consistent state and functional family. Nonlinear f converges
/// at second order; affine f sits at roundoff.
struct RefinementResult {
  std::array<double, 3> defect{};  // normalized, at N = 8, 16, 32
  double order = 0.0;              // mean log2 decay rate
};
RefinementResult casimir_refinement(const EquationOfState& eos,
                                    const TransportCoefficients& coeffs,
                                    const EntropyProfile& profile,
                                    std::uint64_t seed, int n_samples = 6);

/// Bracket dynamics vs the direct Navier-Stokes oracle. The
/// bracket-consistent comparison runs on `n_states` random smooth states at
/// 16^3; the eq14 gap is measured under refinement N = 16, 32, 64.
struct OracleResult {
  double max_rel_diff_bc = 0.0;
  std::array<double, 3> eq14_gap{};
  double eq14_order = 0.0;
};
OracleResult oracle_equivalence(const EquationOfState& eos,
                                const TransportCoefficients& coeffs,
                                std::uint64_t seed, int n_states = 10);

/// Weak-form consistency: integrate(F_psi . rhs(G)) vs the scalar brackets.
struct WeakFormResult {
  double max_poisson_rel = 0.0;
  double max_metric_rel = 0.0;
};
WeakFormResult weak_form(const BracketContext& ctx, int n_pairs,
                         std::uint64_t seed);

/// Agreement of the canonical metric bracket with the literal
/// viscosity-tensor form and with the five-term stress form.
struct FormsResult {
  double max_tensor_form_rel = 0.0;
  double max_stress_form_rel = 0.0;
};
FormsResult forms_agreement(const BracketContext& ctx, int n_pairs,
                            std::uint64_t seed);

/// Directional-derivative audit of one functional: central differences in
/// eps against integrate(dF/dpsi . dpsi) over an eps sweep.
struct AuditResult {
  std::string label;
  double floor_error = 0.0;        // best relative error over the sweep
  bool quadratic_regime = false;   // a decade step showed ~eps^2 decay
  bool fd_exact = false;           // truncation never rose above roundoff
};
AuditResult audit_functional(const Functional& F, const FluidState& state,
                             std::uint64_t seed);

/// Audits H, M, P, S_f for several profiles, the free energy, and n random
/// functionals.
std::vector<AuditResult> audit_all(const FluidState& state,
                                   const EquationOfState& eos, int n_random,
                                   std::uint64_t seed);

/// Bracket-symmetry defect under an asymmetric conductivity tensor
/// kappa_sym + alpha * kappa_anti, fit linearly in alpha.
struct OnsagerResult {
  std::array<double, 5> alphas{};
  std::array<double, 5> defects{};
  double r_squared = 0.0;
};
OnsagerResult onsager_defect(const BracketContext& ctx, std::uint64_t seed);

/// The full invariant suite on one configuration, as printed by `mns check`.
std::vector<CheckResult> run_invariant_suite(const RunConfig& config);

}  // namespace mns::checks
