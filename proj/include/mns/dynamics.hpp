#pragma once

#include <functional>
#include <vector>

#include "mns/brackets.hpp"
#include "mns/config.hpp"

namespace mns {

/// Direct Navier-Stokes right-hand side, the oracle the bracket dynamics is
/// checked against. It never touches functionals or brackets: stress, heat
/// flux and every advective term are assembled from plain field arithmetic.
///
/// eq14 mode is the literal textbook discretization
///   v_i' = -v_k D_k v_i - (1/rho) D_i p + (1/rho) D_k sigma_ik,
///   s'   = -v_k D_k s + sigma_ik D_k v_i / (rho T) - (1/(rho T)) D_k q_k,
///   rho' = -D_k (rho v_k),  q_k = -kappa D_k T;
/// it agrees with the bracket dynamics at second order in h.
///
/// bracket_consistent mode writes the same equations in the rotational /
/// enthalpy-gradient form (exactly equal in the continuum) with the
/// bracket-native heat flux, and matches the bracket dynamics with the
/// linear profile f = lambda s to roundoff.
Tendency direct_ns_rhs(const FluidState& state, const EquationOfState& eos,
                       const TransportCoefficients& coeffs, HeatMode mode);

/// psi' = {psi, H} + (psi, S_f) via the brackets.
Tendency metriplectic_rhs(const FluidState& state, const EquationOfState& eos,
                          const TransportCoefficients& coeffs,
                          const EntropyProfile& profile,
                          DissipationPath path = DissipationPath::entropy);

using RhsFn = std::function<Tendency(const FluidState&)>;

/// Classical four-stage explicit step; aborts with a diagnostic snapshot
/// message if the stepped state violates rho > 0 or finiteness.
FluidState rk4_step(const FluidState& state, double dt, const RhsFn& rhs);

/// min over nodes of cfl*h/(|v| + c_s) and dfl*h^2 rho c_v / max(eta, zeta,
/// kappa); both the advective and the diffusive limits bind because the
/// dissipation is explicit.
double stable_dt(const FluidState& state, const EquationOfState& eos,
                 const TransportCoefficients& coeffs, double cfl = 0.4,
                 double dfl = 0.25);

struct DiagnosticsRecord {
  double t = 0.0;
  double H = 0.0;
  double M = 0.0;
  double P[3] = {0.0, 0.0, 0.0};
  double S_f = 0.0;
  double dSdt_bracket = 0.0;   // (S_f, S_f) at this snapshot
  double dSdt_observed = 0.0;  // centered difference over adjacent records
  double H_drift_rel = 0.0;
  double max_abs_v = 0.0;
  double min_rho = 0.0;
  double min_T = 0.0;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  FluidState final_state;
  double dt = 0.0;
  int steps = 0;
};

using SnapshotSink =
    std::function<void(int step, double t, const FluidState& state)>;

/// Deterministic time loop with cadence-controlled diagnostics; snapshots go
/// to `sink` when provided (always at the first and last step, and every
/// `snapshot_every` steps when positive).
RunResult run(const RunConfig& config, const SnapshotSink& sink = {});

FluidState initial_condition(const Grid& g, const EquationOfState& eos,
                             InitialPreset preset, double amplitude,
                             std::uint64_t seed);

struct EquilibriumResidual {
  double max_dF_v = 0.0;    // max |dF/dv|
  double max_dF_s = 0.0;    // max |dF/ds|
  double max_dF_rho = 0.0;  // max |dF/drho - mean|: criticality modulo the
                            // mass Casimir shift
  double max_rhs = 0.0;     // max-norm of the full tendency
  bool critical = false;
  bool equilibrium = false;
};

/// Residuals of the free-energy criticality conditions and of the full
/// metriplectic tendency. A critical point is an equilibrium; the converse
/// fails (any uniform state has zero tendency).
EquilibriumResidual equilibrium_residual(const FluidState& state,
                                         const EquationOfState& eos,
                                         const TransportCoefficients& coeffs,
                                         const EntropyProfile& profile,
                                         double tol = 1e-11);

/// Root-finds s0 with T(rho0, s0) = -f'(s0) and returns the uniform state
/// (v = 0, rho0, s0), the free-energy critical point modulo the mass
/// Casimir. Throws std::invalid_argument if the profile admits no root.
FluidState find_uniform_critical_state(const Grid& g,
                                       const EquationOfState& eos,
                                       const EntropyProfile& profile,
                                       double rho0);

}  // namespace mns
