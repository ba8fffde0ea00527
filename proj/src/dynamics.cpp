#include "mns/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mns/random_fields.hpp"

namespace mns {

namespace {

std::array<std::array<ScalarField, 3>, 3> velocity_gradients(
    const VectorField& v) {
  std::array<std::array<ScalarField, 3>, 3> dv;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) dv[a][b] = diff_or_zero(v[b], a);
  return dv;
}

ScalarField viscous_divergence(const SymTensorField& sig, int i) {
  ScalarField d(sig.grid());
  for (int k = 0; k < 3; ++k)
    if (sig.grid().active(k)) d += central_diff(sig(i, k), k);
  return d;
}

ScalarField stress_heating(const SymTensorField& sig,
                           const std::array<std::array<ScalarField, 3>, 3>& dv,
                           const ScalarField& rho_T) {
  // sigma_ik D_k v_i / (rho T)
  ScalarField acc(sig.grid());
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      acc += sig(i, k) * dv[k][i];
  return acc / rho_T;
}

}  // namespace

Tendency direct_ns_rhs(const FluidState& state, const EquationOfState& eos,
                       const TransportCoefficients& coeffs, HeatMode mode) {
  validate_state(state);
  const Grid& g = state.grid();
  const ScalarField p = pressure(state.rho, state.s, eos);
  const ScalarField T = temperature(state.rho, state.s, eos);
  if (min_value(T) <= 0.0)
    throw NumericalError("direct_ns_rhs: nonpositive temperature");

  const ScalarField inv_rho = combine([](double r) { return 1.0 / r; },
                                      state.rho);
  const ScalarField rho_T = state.rho * T;
  const auto dv = velocity_gradients(state.v);
  const SymTensorField sig = stress_from_gradients(
      dv, evaluate_eta(coeffs, p, T), evaluate_zeta(coeffs, p, T));

  Tendency t = zero_tendency(g);

  // Continuity, identical in both modes.
  {
    VectorField m(g);
    for (int k = 0; k < 3; ++k) m[k] = state.rho * state.v[k];
    t.rho = combine([](double x) { return -x; }, divergence(m));
  }

  // Entropy advection + viscous heating, identical in both modes.
  t.s = stress_heating(sig, dv, rho_T);
  for (int k = 0; k < 3; ++k)
    if (g.active(k))
      t.s -= state.v[k] * central_diff(state.s, k);

  if (mode == HeatMode::eq14) {
    // Momentum: -v_k D_k v_i - (1/rho) D_i p + (1/rho) D_k sigma_ik.
    for (int i = 0; i < 3; ++i) {
      ScalarField adv(g);
      for (int k = 0; k < 3; ++k) adv += state.v[k] * dv[k][i];
      t.v[i] = combine(
          [](double a, double ir, double gp, double dsig) {
            return -a - ir * gp + ir * dsig;
          },
          adv, inv_rho, diff_or_zero(p, i), viscous_divergence(sig, i));
    }
    // Heat: -(1/(rho T)) D_k q_k with q = -kappa grad T.
    const VectorField q = heat_flux(T, coeffs);
    t.s -= divergence(q) / rho_T;
  } else {
    // Rotational / enthalpy-gradient momentum equation:
    // -D_i(|v|^2/2 + U + p/rho) - (omega x v)_i + T D_i s
    //   + (1/rho) D_k sigma_ik.
    const ScalarField bernoulli = combine(
        [&eos](double r, double sv, double vx, double vy, double vz,
               double pv) {
          const double vv = vx * vx + vy * vy + vz * vz;
          return 0.5 * vv + eos.internal_energy(r, sv) + pv / r;
        },
        state.rho, state.s, state.v[0], state.v[1], state.v[2], p);
    const VectorField omega = curl(state.v);
    const ScalarField cross[3] = {
        omega[1] * state.v[2] - omega[2] * state.v[1],
        omega[2] * state.v[0] - omega[0] * state.v[2],
        omega[0] * state.v[1] - omega[1] * state.v[0]};
    for (int i = 0; i < 3; ++i)
      t.v[i] = combine(
          [](double db, double c, double Tv, double gs, double ir,
             double dsig) { return -db - c + Tv * gs + ir * dsig; },
          diff_or_zero(bernoulli, i), cross[i], T, diff_or_zero(state.s, i),
          inv_rho, viscous_divergence(sig, i));

    // Bracket-native heat term with the linear profile f = lambda s:
    // s' += -(1/(lambda rho T)) D.(kappa T^2 grad((T + lambda)/T)).
    const double lambda = coeffs.lambda;
    const ScalarField r_tilde = combine(
        [lambda](double Tv) { return (Tv + lambda) / Tv; }, T);
    const VectorField dr = gradient(r_tilde);
    ScalarField heat_div(g);
    if (coeffs.tensor_mode()) {
      const Mat3& kt = *coeffs.kappa_tensor;
      for (int i = 0; i < 3; ++i) {
        if (!g.active(i)) continue;
        const ScalarField flux = combine(
            [&kt, i](double Tv, double a0, double a1, double a2) {
              return Tv * Tv * (kt[i][0] * a0 + kt[i][1] * a1 + kt[i][2] * a2);
            },
            T, dr[0], dr[1], dr[2]);
        heat_div += central_diff(flux, i);
      }
    } else {
      const ScalarField kf = evaluate_kappa(coeffs, T);
      for (int k = 0; k < 3; ++k) {
        if (!g.active(k)) continue;
        const ScalarField flux = combine(
            [](double kv, double Tv, double a) { return kv * Tv * Tv * a; },
            kf, T, dr[k]);
        heat_div += central_diff(flux, k);
      }
    }
    t.s -= combine([lambda](double h, double rt) { return h / (lambda * rt); },
                   heat_div, rho_T);
  }
  return t;
}

Tendency metriplectic_rhs(const FluidState& state, const EquationOfState& eos,
                          const TransportCoefficients& coeffs,
                          const EntropyProfile& profile,
                          DissipationPath path) {
  const BracketContext ctx = make_context(state, eos, coeffs);
  return full_rhs(ctx, profile, path);
}

FluidState rk4_step(const FluidState& state, double dt, const RhsFn& rhs) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
  const Tendency k1 = rhs(state);
  const Tendency k2 = rhs(axpy(state, 0.5 * dt, k1));
  const Tendency k3 = rhs(axpy(state, 0.5 * dt, k2));
  const Tendency k4 = rhs(axpy(state, dt, k3));

  const double c = dt / 6.0;
  auto step = [c](double y, double a, double b, double d, double e) {
    return y + c * (a + 2.0 * b + 2.0 * d + e);
  };
  FluidState out;
  out.rho = combine(step, state.rho, k1.rho, k2.rho, k3.rho, k4.rho);
  out.s = combine(step, state.s, k1.s, k2.s, k3.s, k4.s);
  out.v = VectorField(state.grid());
  for (int a = 0; a < 3; ++a)
    out.v[a] = combine(step, state.v[a], k1.v[a], k2.v[a], k3.v[a], k4.v[a]);
  out.version = state.version + 1;

  try {
    validate_state(out);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("rk4_step: state invalid after step (") +
                         e.what() + "); min rho=" +
                         std::to_string(min_value(out.rho)) +
                         ", max |v|=" + std::to_string(max_abs(out.v)));
  }
  return out;
}

double stable_dt(const FluidState& state, const EquationOfState& eos,
                 const TransportCoefficients& coeffs, double cfl, double dfl) {
  validate_state(state);
  const Grid& g = state.grid();
  const double h = g.min_spacing();
  const ScalarField p = pressure(state.rho, state.s, eos);
  const ScalarField T = temperature(state.rho, state.s, eos);
  const ScalarField eta = evaluate_eta(coeffs, p, T);
  const ScalarField zeta = evaluate_zeta(coeffs, p, T);
  ScalarField kap(g, 0.0);
  if (coeffs.tensor_mode()) {
    double row_max = 0.0;
    for (int i = 0; i < 3; ++i) {
      double row = 0.0;
      for (int j = 0; j < 3; ++j) row += std::abs((*coeffs.kappa_tensor)[i][j]);
      row_max = std::max(row_max, row);
    }
    kap = ScalarField(g, row_max);
  } else {
    kap = evaluate_kappa(coeffs, T);
  }

  const auto rho = state.rho.data(), sd = state.s.data();
  const auto vx = state.v[0].data(), vy = state.v[1].data(),
             vz = state.v[2].data();
  const std::span<const double> ed = eta.data();
  const std::span<const double> zd = zeta.data();
  const std::span<const double> kd = kap.data();
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double speed = std::sqrt(vx[n] * vx[n] + vy[n] * vy[n] +
                                   vz[n] * vz[n]) +
                         eos.sound_speed(rho[n], sd[n]);
    dt = std::min(dt, cfl * h / speed);
    const double diff = std::max({ed[n], zd[n], kd[n]});
    if (diff > 0.0)
      dt = std::min(dt, dfl * h * h * rho[n] * eos.c_v / diff);
  }
  return dt;
}

FluidState initial_condition(const Grid& g, const EquationOfState& eos,
                             InitialPreset preset, double amplitude,
                             std::uint64_t seed) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (preset) {
    case InitialPreset::uniform:
      return make_uniform_state(g, eos.rho_ref, eos.s_ref);
    case InitialPreset::shear: {
      if (!g.active(1))
        throw std::invalid_argument("shear preset needs an active y axis");
      FluidState st = make_uniform_state(g, eos.rho_ref, eos.s_ref);
      for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
          for (int k = 0; k < g.dims[2]; ++k)
            st.v[0].at(i, j, k) =
                amplitude * std::sin(two_pi * j / g.dims[1]);
      return st;
    }
    case InitialPreset::entropy_bump: {
      if (!g.active(0))
        throw std::invalid_argument("entropy_bump preset needs an active x axis");
      FluidState st = make_uniform_state(g, eos.rho_ref, eos.s_ref);
      // Smooth periodic stand-in for a Gaussian bump.
      for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
          for (int k = 0; k < g.dims[2]; ++k)
            st.s.at(i, j, k) =
                eos.s_ref +
                amplitude *
                    std::exp(2.0 * (std::cos(two_pi * i / g.dims[0]) - 1.0));
      return st;
    }
    default:
      return random_smooth_state(g, eos.rho_ref, eos.s_ref, seed, amplitude);
  }
}

RunResult run(const RunConfig& config, const SnapshotSink& sink) {
  const Grid g = config.grid();
  const EntropyProfile profile = config.profile();
  const Functional ham = hamiltonian(config.eos);
  const Functional total_mass = mass();
  const std::array<Functional, 3> mom = momentum();
  const Functional entropy = generalized_entropy(profile);

  FluidState state = initial_condition(g, config.eos, config.preset,
                                       config.ic_amplitude, config.ic_seed);
  const double dt = config.dt ? *config.dt
                              : stable_dt(state, config.eos, config.transport);
  const int n_steps = int(std::ceil(config.t_end / dt - 1e-12));

  RunResult result;
  result.dt = dt;
  result.steps = n_steps;

  const double H0 = ham.value(state);
  auto record = [&](double t, const FluidState& st) {
    const BracketContext ctx = make_context(st, config.eos, config.transport);
    const MetricSlot ent_slot = make_metric_slot(ctx, entropy);
    DiagnosticsRecord rec;
    rec.t = t;
    rec.H = ham.value(st);
    rec.M = total_mass.value(st);
    for (int j = 0; j < 3; ++j) rec.P[j] = mom[j].value(st);
    rec.S_f = entropy.value(st);
    rec.dSdt_bracket = metric_bracket(ctx, ent_slot, ent_slot);
    rec.H_drift_rel = (rec.H - H0) / std::abs(H0);
    rec.max_abs_v = max_abs(st.v);
    rec.min_rho = min_value(st.rho);
    rec.min_T = min_value(ctx.T);
    result.records.push_back(rec);
  };
  auto snapshot = [&](int step, double t, const FluidState& st) {
    if (!sink) return;
    const bool cadence =
        config.snapshot_every > 0 && step % config.snapshot_every == 0;
    if (step == 0 || step == n_steps || cadence) sink(step, t, st);
  };

  auto rhs = [&](const FluidState& st) {
    return metriplectic_rhs(st, config.eos, config.transport, profile);
  };

  record(0.0, state);
  snapshot(0, 0.0, state);
  for (int step = 1; step <= n_steps; ++step) {
    const double step_dt =
        step == n_steps ? config.t_end - (n_steps - 1) * dt : dt;
    state = rk4_step(state, step_dt, rhs);
    const double t = step == n_steps ? config.t_end : step * dt;
    if (step % config.output_every == 0 || step == n_steps)
      record(t, state);
    snapshot(step, t, state);
  }

  // Observed entropy rate: centered differences over adjacent records,
  // one-sided at the ends.
  auto& recs = result.records;
  const std::size_t nr = recs.size();
  for (std::size_t i = 0; i < nr; ++i) {
    if (nr < 2) break;
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == nr ? i : i + 1;
    recs[i].dSdt_observed =
        (recs[hi].S_f - recs[lo].S_f) / (recs[hi].t - recs[lo].t);
  }

  result.final_state = std::move(state);
  return result;
}

EquilibriumResidual equilibrium_residual(const FluidState& state,
                                         const EquationOfState& eos,
                                         const TransportCoefficients& coeffs,
                                         const EntropyProfile& profile,
                                         double tol) {
  const Functional fe = free_energy(eos, profile);
  const FunctionalDerivative d = fe.derivative(state);

  EquilibriumResidual r;
  r.max_dF_v = max_abs(d.v);
  r.max_dF_s = max_abs(d.s);
  const double mean = integrate(d.rho) /
                      (integrate(ScalarField(state.grid(), 1.0)));
  r.max_dF_rho = max_abs(combine([mean](double x) { return x - mean; }, d.rho));

  const Tendency t = metriplectic_rhs(state, eos, coeffs, profile);
  r.max_rhs = std::max({max_abs(t.v), max_abs(t.rho), max_abs(t.s)});
  r.critical = r.max_dF_v <= tol && r.max_dF_s <= tol && r.max_dF_rho <= tol;
  r.equilibrium = r.max_rhs <= tol;
  return r;
}

FluidState find_uniform_critical_state(const Grid& g,
                                       const EquationOfState& eos,
                                       const EntropyProfile& profile,
                                       double rho0) {
  auto residual = [&](double s) {
    return eos.temperature(rho0, s) + profile.f_prime(s);
  };
  // Bracket a sign change, then bisect to convergence.
  double lo = 0.0, hi = 0.0;
  bool found = false;
  double prev_s = -6.0, prev_r = residual(prev_s);
  for (double s = -6.0 + 0.05; s <= 6.0; s += 0.05) {
    const double rv = residual(s);
    if (prev_r == 0.0 || (prev_r < 0.0) != (rv < 0.0)) {
      lo = prev_s;
      hi = s;
      found = true;
      break;
    }
    prev_s = s;
    prev_r = rv;
  }
  if (!found)
    throw std::invalid_argument(
        "find_uniform_critical_state: profile admits no critical entropy "
        "(needs f'(s) = -T < 0 somewhere)");
  double flo = residual(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = residual(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return make_uniform_state(g, rho0, 0.5 * (lo + hi));
}

}  // namespace mns
