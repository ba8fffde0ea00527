#include "mns/brackets.hpp"

#include <cfloat>
#include <cmath>
#include <ostream>
#include <string>

namespace mns {

namespace {

double integrate_buffer(const Grid& g, std::span<const double> buf) {
  return g.cell_volume() * kernels::pairwise_sum(buf);
}

double normalized(double defect, double gross) {
  if (defect == 0.0) return 0.0;
  return std::abs(defect) / std::max(gross, DBL_MIN);
}

}  // namespace

BracketContext make_context(const FluidState& state,
                            const EquationOfState& eos,
                            const TransportCoefficients& coeffs) {
  validate_state(state);
  BracketContext ctx;
  ctx.state = state;
  ctx.eos = eos;
  ctx.coeffs = coeffs;
  ctx.state_version = state.version;

  ctx.T = temperature(state.rho, state.s, eos);
  {
    const auto t = ctx.T.data();
    for (std::size_t n = 0; n < t.size(); ++n)
      if (!(t[n] > 0.0))
        throw NumericalError("bracket: nonpositive temperature at node " +
                             std::to_string(n));
  }
  ctx.p = pressure(state.rho, state.s, eos);
  ctx.rho_T = state.rho * ctx.T;
  ctx.inv_rho = combine([](double r) { return 1.0 / r; }, state.rho);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) ctx.dv[a][b] = diff_or_zero(state.v[b], a);
  ctx.div_v = ctx.dv[0][0] + ctx.dv[1][1] + ctx.dv[2][2];
  ctx.omega = VectorField(state.grid());
  ctx.omega[0] = ctx.dv[1][2] - ctx.dv[2][1];
  ctx.omega[1] = ctx.dv[2][0] - ctx.dv[0][2];
  ctx.omega[2] = ctx.dv[0][1] - ctx.dv[1][0];
  ctx.grad_s = gradient(state.s);

  ctx.eta = evaluate_eta(coeffs, ctx.p, ctx.T);
  ctx.zeta = evaluate_zeta(coeffs, ctx.p, ctx.T);
  if (!coeffs.tensor_mode()) ctx.kappa = evaluate_kappa(coeffs, ctx.T);
  ctx.sigma = stress_from_gradients(ctx.dv, ctx.eta, ctx.zeta);
  return ctx;
}

// ---- antisymmetric bracket ---------------------------------------------------

PoissonSlot make_poisson_slot(const BracketContext& ctx, const Functional& F) {
  PoissonSlot s;
  s.d = F.derivative(ctx.state);
  s.div_dv = divergence(s.d.v);
  s.grad_drho = gradient(s.d.rho);
  return s;
}

double poisson_bracket(const BracketContext& ctx, const PoissonSlot& F,
                       const PoissonSlot& G) {
  const std::size_t n = ctx.grid().size();
  std::vector<double> buf(n);

  const auto frho = F.d.rho.data(), fs = F.d.s.data();
  const auto grho = G.d.rho.data(), gs = G.d.s.data();
  const std::span<const double> fv[3] = {F.d.v[0].data(), F.d.v[1].data(),
                                         F.d.v[2].data()};
  const std::span<const double> gv[3] = {G.d.v[0].data(), G.d.v[1].data(),
                                         G.d.v[2].data()};
  const auto divgv = G.div_dv.data();
  const std::span<const double> ggrho[3] = {
      G.grad_drho[0].data(), G.grad_drho[1].data(), G.grad_drho[2].data()};
  const std::span<const double> w[3] = {ctx.omega[0].data(),
                                        ctx.omega[1].data(),
                                        ctx.omega[2].data()};
  const std::span<const double> ds[3] = {ctx.grad_s[0].data(),
                                         ctx.grad_s[1].data(),
                                         ctx.grad_s[2].data()};
  const auto ir = ctx.inv_rho.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const double wx = w[0][i] * ir[i], wy = w[1][i] * ir[i],
                 wz = w[2][i] * ir[i];
    const double cx = wy * gv[2][i] - wz * gv[1][i];
    const double cy = wz * gv[0][i] - wx * gv[2][i];
    const double cz = wx * gv[1][i] - wy * gv[0][i];
    double term = frho[i] * divgv[i];
    term += fv[0][i] * ggrho[0][i] + fv[1][i] * ggrho[1][i] +
            fv[2][i] * ggrho[2][i];
    term += fv[0][i] * cx + fv[1][i] * cy + fv[2][i] * cz;
    for (int a = 0; a < 3; ++a)
      term += ds[a][i] * ir[i] * (fs[i] * gv[a][i] - fv[a][i] * gs[i]);
    buf[i] = -term;
  }
  return integrate_buffer(ctx.grid(), buf);
}

double poisson_bracket(const BracketContext& ctx, const Functional& F,
                       const Functional& G) {
  return poisson_bracket(ctx, make_poisson_slot(ctx, F),
                         make_poisson_slot(ctx, G));
}

Tendency poisson_rhs(const BracketContext& ctx, const PoissonSlot& G) {
  const std::size_t n = ctx.grid().size();
  Tendency t = zero_tendency(ctx.grid());

  const auto gs = G.d.s.data();
  const std::span<const double> gv[3] = {G.d.v[0].data(), G.d.v[1].data(),
                                         G.d.v[2].data()};
  const std::span<const double> ggrho[3] = {
      G.grad_drho[0].data(), G.grad_drho[1].data(), G.grad_drho[2].data()};
  const std::span<const double> w[3] = {ctx.omega[0].data(),
                                        ctx.omega[1].data(),
                                        ctx.omega[2].data()};
  const std::span<const double> ds[3] = {ctx.grad_s[0].data(),
                                         ctx.grad_s[1].data(),
                                         ctx.grad_s[2].data()};
  const auto ir = ctx.inv_rho.data();
  std::span<double> tv[3] = {t.v[0].data(), t.v[1].data(), t.v[2].data()};
  auto ts = t.s.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const double wx = w[0][i] * ir[i], wy = w[1][i] * ir[i],
                 wz = w[2][i] * ir[i];
    const double cx = wy * gv[2][i] - wz * gv[1][i];
    const double cy = wz * gv[0][i] - wx * gv[2][i];
    const double cz = wx * gv[1][i] - wy * gv[0][i];
    tv[0][i] = -ggrho[0][i] - cx + ds[0][i] * ir[i] * gs[i];
    tv[1][i] = -ggrho[1][i] - cy + ds[1][i] * ir[i] * gs[i];
    tv[2][i] = -ggrho[2][i] - cz + ds[2][i] * ir[i] * gs[i];
    ts[i] = -(ds[0][i] * ir[i] * gv[0][i] + ds[1][i] * ir[i] * gv[1][i] +
              ds[2][i] * ir[i] * gv[2][i]);
  }
  t.rho = combine([](double x) { return -x; }, G.div_dv);
  return t;
}

Tendency poisson_rhs(const BracketContext& ctx, const Functional& G) {
  return poisson_rhs(ctx, make_poisson_slot(ctx, G));
}

double poisson_bracket_gross(const BracketContext& ctx, const PoissonSlot& F,
                             const PoissonSlot& G) {
  const std::size_t n = ctx.grid().size();
  std::vector<double> buf(n);
  const auto frho = F.d.rho.data(), fs = F.d.s.data();
  const auto gs = G.d.s.data();
  const std::span<const double> fv[3] = {F.d.v[0].data(), F.d.v[1].data(),
                                         F.d.v[2].data()};
  const std::span<const double> gv[3] = {G.d.v[0].data(), G.d.v[1].data(),
                                         G.d.v[2].data()};
  const auto divgv = G.div_dv.data();
  const std::span<const double> ggrho[3] = {
      G.grad_drho[0].data(), G.grad_drho[1].data(), G.grad_drho[2].data()};
  const std::span<const double> w[3] = {ctx.omega[0].data(),
                                        ctx.omega[1].data(),
                                        ctx.omega[2].data()};
  const std::span<const double> ds[3] = {ctx.grad_s[0].data(),
                                         ctx.grad_s[1].data(),
                                         ctx.grad_s[2].data()};
  const auto ir = ctx.inv_rho.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const double fvn = std::sqrt(fv[0][i] * fv[0][i] + fv[1][i] * fv[1][i] +
                                 fv[2][i] * fv[2][i]);
    const double gvn = std::sqrt(gv[0][i] * gv[0][i] + gv[1][i] * gv[1][i] +
                                 gv[2][i] * gv[2][i]);
    const double wn = std::sqrt(w[0][i] * w[0][i] + w[1][i] * w[1][i] +
                                w[2][i] * w[2][i]) *
                      ir[i];
    double term = std::abs(frho[i] * divgv[i]);
    for (int a = 0; a < 3; ++a) term += std::abs(fv[a][i] * ggrho[a][i]);
    term += fvn * wn * gvn;
    for (int a = 0; a < 3; ++a)
      term += std::abs(ds[a][i]) * ir[i] *
              (std::abs(fs[i] * gv[a][i]) + std::abs(fv[a][i] * gs[i]));
    buf[i] = term;
  }
  return integrate_buffer(ctx.grid(), buf);
}

// ---- symmetric bracket ---------------------------------------------------------

MetricSlot make_metric_slot(const BracketContext& ctx, const Functional& F) {
  MetricSlot s;
  s.d = F.derivative(ctx.state);
  // Plain divisions: x/x is exactly 1, so constant slots stay exactly
  // constant and their differences vanish bitwise.
  for (int k = 0; k < 3; ++k) s.u[k] = s.d.v[k] / ctx.state.rho;
  s.r = s.d.s / ctx.rho_T;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) s.X[i][k] = diff_or_zero(s.u[k], i);

  // A_ik = X_ik - (D_k v_i) r; store trace and traceless symmetric part.
  std::array<std::array<ScalarField, 3>, 3> A;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      A[i][k] = combine(
          [](double x, double c, double r) { return x - c * r; }, s.X[i][k],
          ctx.dv[k][i], s.r);
  s.tr = A[0][0] + A[1][1] + A[2][2];
  for (int i = 0; i < 3; ++i)
    s.dev[i] = combine([](double a, double t) { return a - t / 3.0; },
                       A[i][i], s.tr);
  s.dev[3] = combine([](double a, double b) { return 0.5 * (a + b); },
                     A[0][1], A[1][0]);
  s.dev[4] = combine([](double a, double b) { return 0.5 * (a + b); },
                     A[0][2], A[2][0]);
  s.dev[5] = combine([](double a, double b) { return 0.5 * (a + b); },
                     A[1][2], A[2][1]);
  for (int k = 0; k < 3; ++k) s.dr[k] = diff_or_zero(s.r, k);
  return s;
}

namespace {

// Conductivity pairing per node; the symmetric-paired tensor evaluation makes
// the swap F<->G a pure operand exchange, hence bitwise symmetric.
struct KappaPairing {
  bool tensor;
  const Mat3* kt;
  std::span<const double> kf;

  double operator()(std::size_t i, const std::span<const double> af[3],
                    const std::span<const double> ag[3]) const {
    if (!tensor) {
      return kf[i] * (af[0][i] * ag[0][i] + af[1][i] * ag[1][i] +
                      af[2][i] * ag[2][i]);
    }
    const Mat3& k = *kt;
    double q = k[0][0] * (af[0][i] * ag[0][i]) +
               k[1][1] * (af[1][i] * ag[1][i]) +
               k[2][2] * (af[2][i] * ag[2][i]);
    q += k[0][1] * (af[0][i] * ag[1][i] + af[1][i] * ag[0][i]);
    q += k[0][2] * (af[0][i] * ag[2][i] + af[2][i] * ag[0][i]);
    q += k[1][2] * (af[1][i] * ag[2][i] + af[2][i] * ag[1][i]);
    return q;
  }
};

KappaPairing kappa_pairing(const BracketContext& ctx) {
  if (ctx.coeffs.tensor_mode())
    return KappaPairing{true, &*ctx.coeffs.kappa_tensor, {}};
  return KappaPairing{false, nullptr, ctx.kappa.data()};
}

void slot_spans(const MetricSlot& s, std::span<const double> dev[6],
                std::span<const double> dr[3]) {
  for (int c = 0; c < 6; ++c) dev[c] = s.dev[c].data();
  for (int k = 0; k < 3; ++k) dr[k] = s.dr[k].data();
}

}  // namespace

double metric_bracket(const BracketContext& ctx, const MetricSlot& F,
                      const MetricSlot& G) {
  const std::size_t n = ctx.grid().size();
  std::vector<double> buf(n);

  std::span<const double> devf[6], devg[6], drf[3], drg[3];
  slot_spans(F, devf, drf);
  slot_spans(G, devg, drg);
  const auto trf = F.tr.data(), trg = G.tr.data();
  const auto T = ctx.T.data(), eta = ctx.eta.data(), zeta = ctx.zeta.data();
  const KappaPairing kp = kappa_pairing(ctx);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const double ss = devf[0][i] * devg[0][i] + devf[1][i] * devg[1][i] +
                      devf[2][i] * devg[2][i] +
                      2.0 * (devf[3][i] * devg[3][i] + devf[4][i] * devg[4][i] +
                             devf[5][i] * devg[5][i]);
    const double visc = T[i] * (2.0 * eta[i] * ss + zeta[i] * (trf[i] * trg[i]));
    const double heat = T[i] * T[i] * kp(i, drf, drg);
    buf[i] = visc + heat;
  }
  return integrate_buffer(ctx.grid(), buf) / ctx.coeffs.lambda;
}

double metric_bracket(const BracketContext& ctx, const Functional& F,
                      const Functional& G) {
  return metric_bracket(ctx, make_metric_slot(ctx, F),
                        make_metric_slot(ctx, G));
}

double metric_bracket_tensor_form(const BracketContext& ctx,
                                  const MetricSlot& F, const MetricSlot& G) {
  const std::size_t n = ctx.grid().size();
  std::vector<double> buf(n);
  const auto T = ctx.T.data(), eta = ctx.eta.data(), zeta = ctx.zeta.data();
  const auto rf = F.r.data(), rg = G.r.data();
  std::span<const double> devf[6], devg[6], drf[3], drg[3];
  slot_spans(F, devf, drf);
  slot_spans(G, devg, drg);
  const KappaPairing kp = kappa_pairing(ctx);

  std::span<const double> xf[3][3], xg[3][3], dv[3][3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      xf[i][k] = F.X[i][k].data();
      xg[i][k] = G.X[i][k].data();
      dv[i][k] = ctx.dv[i][k].data();
    }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const ViscosityTensor lam = viscosity_tensor(eta[i], zeta[i]);
    Mat3 A{}, B{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        A[a][b] = xf[a][b][i] - dv[b][a][i] * rf[i];
        B[a][b] = xg[a][b][i] - dv[b][a][i] * rg[i];
      }
    buf[i] = T[i] * contract(lam, A, B) + T[i] * T[i] * kp(i, drf, drg);
  }
  return integrate_buffer(ctx.grid(), buf) / ctx.coeffs.lambda;
}

double metric_bracket_stress_form(const BracketContext& ctx,
                                  const MetricSlot& F, const MetricSlot& G) {
  const Grid& g = ctx.grid();
  const std::size_t n = g.size();

  // Terms 1 and 2: (1/rho) F_{v_i} D_k[ (sigma_ik/rho) G_s ] and F<->G.
  ScalarField t12(g);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      if (!g.active(k)) continue;
      const ScalarField fluxG = combine(
          [](double sig, double ir, double gsv) { return sig * ir * gsv; },
          ctx.sigma(i, k), ctx.inv_rho, G.d.s);
      const ScalarField fluxF = combine(
          [](double sig, double ir, double fsv) { return sig * ir * fsv; },
          ctx.sigma(i, k), ctx.inv_rho, F.d.s);
      t12 += combine(
          [](double ir, double fv, double dg, double gv, double df) {
            return ir * (fv * dg + gv * df);
          },
          ctx.inv_rho, F.d.v[i], central_diff(fluxG, k), G.d.v[i],
          central_diff(fluxF, k));
    }

  // Term 3: (sigma_ik / T) (D_k v_i) F_s G_s / rho^2.
  std::vector<double> buf(n);
  std::span<const double> sig[3][3], dv[3][3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      sig[i][k] = ctx.sigma(i, k).data();
      dv[i][k] = ctx.dv[i][k].data();
    }
  const auto T = ctx.T.data(), ir = ctx.inv_rho.data();
  const auto fs = F.d.s.data(), gs = G.d.s.data();
  std::span<const double> drf[3], drg[3], devf[6], devg[6];
  slot_spans(F, devf, drf);
  slot_spans(G, devg, drg);
  const KappaPairing kp = kappa_pairing(ctx);
  std::span<const double> xf[3][3], xg[3][3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      xf[i][k] = F.X[i][k].data();
      xg[i][k] = G.X[i][k].data();
    }
  const auto eta = ctx.eta.data(), zeta = ctx.zeta.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(n); ++m) {
    double s3 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) s3 += sig[i][k][m] * dv[k][i][m];
    s3 *= fs[m] * gs[m] * ir[m] * ir[m] / T[m];

    // Term 4: kappa T^2 grad r_F . grad r_G.
    const double s4 = T[m] * T[m] * kp(m, drf, drg);

    // Term 5: T Lambda_ikmn X_F[m][n] X_G[k][i], literal contraction.
    const ViscosityTensor lam = viscosity_tensor(eta[m], zeta[m]);
    double s5 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            s5 += lam.a[i][k][a][b] * xf[a][b][m] * xg[k][i][m];
    buf[m] = s3 + s4 + T[m] * s5;
  }

  const double rest = integrate_buffer(g, buf);
  return (integrate(t12) + rest) / ctx.coeffs.lambda;
}

double metric_bracket_gross(const BracketContext& ctx, const MetricSlot& F,
                            const MetricSlot& G) {
  const std::size_t n = ctx.grid().size();
  std::vector<double> buf(n);
  const auto T = ctx.T.data(), eta = ctx.eta.data(), zeta = ctx.zeta.data();
  const auto rf = F.r.data(), rg = G.r.data();
  std::span<const double> xf[3][3], xg[3][3], dv[3][3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      xf[i][k] = F.X[i][k].data();
      xg[i][k] = G.X[i][k].data();
      dv[i][k] = ctx.dv[i][k].data();
    }
  std::span<const double> drf[3], drg[3], devf[6], devg[6];
  slot_spans(F, devf, drf);
  slot_spans(G, devg, drg);
  double kappa_abs = 0.0;
  if (ctx.coeffs.tensor_mode()) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        kappa_abs = std::max(kappa_abs, std::abs((*ctx.coeffs.kappa_tensor)[i][j]));
  }
  const auto kf = ctx.coeffs.tensor_mode() ? std::span<const double>()
                                           : ctx.kappa.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(n); ++m) {
    double pair_sum = 0.0, taf = 0.0, tag = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        const double ef = std::abs(xf[i][k][m]) + std::abs(dv[k][i][m] * rf[m]);
        const double eg = std::abs(xg[i][k][m]) + std::abs(dv[k][i][m] * rg[m]);
        pair_sum += ef * eg;
        if (i == k) {
          taf += ef;
          tag += eg;
        }
      }
    double hf = 0.0;
    const double kv = kf.empty() ? kappa_abs : kf[m];
    for (int k = 0; k < 3; ++k)
      hf += kv * std::abs(drf[k][m]) * std::abs(drg[k][m]);
    buf[m] = T[m] * (2.0 * eta[m] * pair_sum + zeta[m] * taf * tag) +
             T[m] * T[m] * hf;
  }
  return integrate_buffer(ctx.grid(), buf) / std::abs(ctx.coeffs.lambda);
}

Tendency metric_rhs(const BracketContext& ctx, const MetricSlot& G) {
  const Grid& g = ctx.grid();
  const double inv_lambda = 1.0 / ctx.coeffs.lambda;

  // W_ik = T (2 eta devA_ik + zeta trA d_ik); symmetric flux tensor.
  SymTensorField W(g);
  for (int i = 0; i < 3; ++i)
    W(i, i) = combine(
        [](double T, double e, double z, double dev, double tr) {
          return T * (2.0 * e * dev + z * tr);
        },
        ctx.T, ctx.eta, ctx.zeta, G.dev[i], G.tr);
  W(0, 1) = combine([](double T, double e, double dev) { return T * 2.0 * e * dev; },
                    ctx.T, ctx.eta, G.dev[3]);
  W(0, 2) = combine([](double T, double e, double dev) { return T * 2.0 * e * dev; },
                    ctx.T, ctx.eta, G.dev[4]);
  W(1, 2) = combine([](double T, double e, double dev) { return T * 2.0 * e * dev; },
                    ctx.T, ctx.eta, G.dev[5]);

  Tendency t = zero_tendency(g);

  // t_v[k] = -(1/lambda) (1/rho) D_a W_ak
  for (int k = 0; k < 3; ++k) {
    ScalarField divW(g);
    for (int a = 0; a < 3; ++a)
      if (g.active(a)) divW += central_diff(W(a, k), a);
    t.v[k] = combine(
        [inv_lambda](double ir, double d) { return -inv_lambda * ir * d; },
        ctx.inv_rho, divW);
  }

  // Heat flux divergence: scalar kappa -> D_k(kappa T^2 D_k r);
  // tensor kappa -> D_i(T^2 kappa_ij D_j r).
  ScalarField heat_div(g);
  if (ctx.coeffs.tensor_mode()) {
    const Mat3& kt = *ctx.coeffs.kappa_tensor;
    for (int i = 0; i < 3; ++i) {
      if (!g.active(i)) continue;
      const ScalarField flux = combine(
          [&kt, i](double T, double a0, double a1, double a2) {
            return T * T * (kt[i][0] * a0 + kt[i][1] * a1 + kt[i][2] * a2);
          },
          ctx.T, G.dr[0], G.dr[1], G.dr[2]);
      heat_div += central_diff(flux, i);
    }
  } else {
    for (int k = 0; k < 3; ++k) {
      if (!g.active(k)) continue;
      const ScalarField flux = combine(
          [](double kv, double T, double a) { return kv * T * T * a; },
          ctx.kappa, ctx.T, G.dr[k]);
      heat_div += central_diff(flux, k);
    }
  }

  // t_s = -(1/lambda) (W : grad(v)^T + heat_div) / (rho T)
  {
    const std::size_t n = g.size();
    std::span<const double> wik[3][3], dv[3][3];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        wik[i][k] = W(i, k).data();
        dv[i][k] = ctx.dv[i][k].data();
      }
    const std::span<const double> hd = heat_div.data();
    const std::span<const double> rt = ctx.rho_T.data();
    auto ts = t.s.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(n); ++m) {
      double wc = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) wc += wik[i][k][m] * dv[k][i][m];
      ts[m] = -inv_lambda * (wc + hd[m]) / rt[m];
    }
  }
  // Density tendency identically zero: no rho slot appears in the bracket.
  return t;
}

Tendency metric_rhs(const BracketContext& ctx, const Functional& G) {
  return metric_rhs(ctx, make_metric_slot(ctx, G));
}

double metric_bracket_with_tensor_kappa_unchecked(const BracketContext& ctx,
                                                  const MetricSlot& F,
                                                  const MetricSlot& G,
                                                  const Mat3& kappa) {
  const std::size_t n = ctx.grid().size();
  std::vector<double> buf(n);
  std::span<const double> devf[6], devg[6], drf[3], drg[3];
  slot_spans(F, devf, drf);
  slot_spans(G, devg, drg);
  const auto trf = F.tr.data(), trg = G.tr.data();
  const auto T = ctx.T.data(), eta = ctx.eta.data(), zeta = ctx.zeta.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const double ss = devf[0][i] * devg[0][i] + devf[1][i] * devg[1][i] +
                      devf[2][i] * devg[2][i] +
                      2.0 * (devf[3][i] * devg[3][i] + devf[4][i] * devg[4][i] +
                             devf[5][i] * devg[5][i]);
    // Literal row-major pairing: realizes an asymmetric kappa faithfully.
    double q = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) q += kappa[a][b] * drf[a][i] * drg[b][i];
    buf[i] = T[i] * (2.0 * eta[i] * ss + zeta[i] * (trf[i] * trg[i])) +
             T[i] * T[i] * q;
  }
  return integrate_buffer(ctx.grid(), buf) / ctx.coeffs.lambda;
}

// ---- combined bracket ----------------------------------------------------------

double full_bracket(const BracketContext& ctx, const Functional& F,
                    const Functional& G) {
  return poisson_bracket(ctx, F, G) + metric_bracket(ctx, F, G);
}

namespace {

Tendency add(Tendency a, const Tendency& b) {
  a.rho += b.rho;
  a.s += b.s;
  a.v += b.v;
  return a;
}

}  // namespace

Tendency full_rhs(const BracketContext& ctx, const EntropyProfile& profile,
                  DissipationPath path) {
  const Tendency ideal = poisson_rhs(ctx, hamiltonian(ctx.eos));
  const Functional gen = path == DissipationPath::entropy
                             ? generalized_entropy(profile)
                             : free_energy(ctx.eos, profile);
  return add(ideal, metric_rhs(ctx, gen));
}

// ---- degeneracy report ---------------------------------------------------------

bool DegeneracyReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

void DegeneracyReport::write_csv(std::ostream& os) const {
  os << "identity,n_samples,max_normalized_defect,pass\n";
  for (const auto& r : rows)
    os << r.identity << ',' << r.n_samples << ','
       << r.max_normalized_defect << ',' << (r.pass ? "pass" : "fail")
       << '\n';
}

DegeneracyReport degeneracy_report(const BracketContext& ctx,
                                   const EntropyProfile& profile,
                                   int n_samples, std::uint64_t seed) {
  DegeneracyReport rep;

  const MetricSlot ham = make_metric_slot(ctx, hamiltonian(ctx.eos));
  const std::array<MetricSlot, 3> mom = {
      make_metric_slot(ctx, momentum(0)), make_metric_slot(ctx, momentum(1)),
      make_metric_slot(ctx, momentum(2))};
  const PoissonSlot mass_slot = make_poisson_slot(ctx, mass());
  const PoissonSlot ent_slot =
      make_poisson_slot(ctx, generalized_entropy(profile));

  double d_energy = 0.0, d_mom = 0.0, d_mass = 0.0, d_ent = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Functional G = random_test_functional(seed + i);
    const MetricSlot gm = make_metric_slot(ctx, G);
    const PoissonSlot gp = make_poisson_slot(ctx, G);

    d_energy = std::max(d_energy,
                        normalized(metric_bracket(ctx, ham, gm),
                                   metric_bracket_gross(ctx, ham, gm)));
    for (int j = 0; j < 3; ++j)
      d_mom = std::max(d_mom, normalized(metric_bracket(ctx, mom[j], gm),
                                         metric_bracket_gross(ctx, mom[j], gm)));
    d_mass = std::max(d_mass, normalized(poisson_bracket(ctx, mass_slot, gp),
                                         poisson_bracket_gross(ctx, mass_slot, gp)));
    d_ent = std::max(d_ent, normalized(poisson_bracket(ctx, ent_slot, gp),
                                       poisson_bracket_gross(ctx, ent_slot, gp)));
  }

  auto row = [&](const std::string& name, double defect) {
    rep.rows.push_back(
        {name, n_samples, defect, defect <= rep.threshold});
  };
  row("sym_energy_degeneracy", d_energy);
  row("sym_momentum_degeneracy", d_mom);
  row("gpb_mass_casimir", d_mass);
  row("gpb_entropy_casimir[" + profile.description + "]", d_ent);
  return rep;
}

}  // namespace mns
