#include "mns/thermo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mns {

EquationOfState EquationOfState::make(double gamma, double c_v, double rho_ref,
                                      double T_ref, double s_ref) {
  if (!(gamma > 1.0)) throw std::invalid_argument("eos: gamma must be > 1");
  if (!(c_v > 0.0)) throw std::invalid_argument("eos: c_v must be > 0");
  if (!(rho_ref > 0.0) || !(T_ref > 0.0))
    throw std::invalid_argument("eos: reference constants must be > 0");
  return EquationOfState{gamma, c_v, rho_ref, T_ref, s_ref};
}

double EquationOfState::internal_energy(double rho, double s) const {
  return c_v * T_ref * std::pow(rho / rho_ref, gamma - 1.0) *
         std::exp((s - s_ref) / c_v);
}

double EquationOfState::pressure(double rho, double s) const {
  return (gamma - 1.0) * rho * internal_energy(rho, s);
}

double EquationOfState::temperature(double rho, double s) const {
  return internal_energy(rho, s) / c_v;
}

double EquationOfState::sound_speed(double rho, double s) const {
  return std::sqrt(gamma * pressure(rho, s) / rho);
}

namespace {

void require_positive_rho(const ScalarField& rho) {
  const auto d = rho.data();
  for (std::size_t n = 0; n < d.size(); ++n)
    if (!(d[n] > 0.0))
      throw NumericalError("thermo: nonpositive density at node " +
                           std::to_string(n));
}

}  // namespace

ScalarField pressure(const ScalarField& rho, const ScalarField& s,
                     const EquationOfState& eos) {
  require_positive_rho(rho);
  return combine([&eos](double r, double sv) { return eos.pressure(r, sv); },
                 rho, s);
}

ScalarField temperature(const ScalarField& rho, const ScalarField& s,
                        const EquationOfState& eos) {
  require_positive_rho(rho);
  return combine(
      [&eos](double r, double sv) { return eos.temperature(r, sv); }, rho, s);
}

ViscosityTensor viscosity_tensor(double eta, double zeta) {
  if (!(eta >= 0.0) || !(zeta >= 0.0))
    throw std::invalid_argument("viscosity_tensor: coefficients must be >= 0");
  ViscosityTensor lam{};
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
          lam.a[i][k][m][n] =
              eta * (d(n, i) * d(m, k) + d(n, k) * d(m, i) -
                     (2.0 / 3.0) * d(i, k) * d(m, n)) +
              zeta * d(i, k) * d(m, n);
  return lam;
}

double contract(const ViscosityTensor& lam, const Mat3& A, const Mat3& B) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) s += lam.a[i][k][m][n] * A[i][k] * B[m][n];
  return s;
}

namespace {

void validate_kappa_tensor(const Mat3& k) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (k[i][j] != k[j][i])
        throw std::invalid_argument(
            "transport: tensor kappa must be exactly symmetric");
  // Nonnegative eigenvalues <=> all principal minors nonnegative.
  for (int i = 0; i < 3; ++i)
    if (k[i][i] < 0.0)
      throw std::invalid_argument("transport: tensor kappa not PSD");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (k[i][i] * k[j][j] - k[i][j] * k[j][i] < 0.0)
        throw std::invalid_argument("transport: tensor kappa not PSD");
  const double det =
      k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1]) -
      k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0]) +
      k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0]);
  if (det < 0.0)
    throw std::invalid_argument("transport: tensor kappa not PSD");
}

}  // namespace

TransportCoefficients TransportCoefficients::make(double eta, double zeta,
                                                  double kappa, double lambda) {
  if (!(eta >= 0.0) || !(zeta >= 0.0) || !(kappa >= 0.0))
    throw std::invalid_argument("transport: eta, zeta, kappa must be >= 0");
  if (!(lambda > 0.0))
    throw std::invalid_argument("transport: lambda must be > 0");
  TransportCoefficients c;
  c.eta = eta;
  c.zeta = zeta;
  c.kappa = kappa;
  c.lambda = lambda;
  return c;
}

TransportCoefficients TransportCoefficients::make_tensor(double eta,
                                                         double zeta,
                                                         const Mat3& kappa,
                                                         double lambda) {
  TransportCoefficients c = make(eta, zeta, 0.0, lambda);
  c.set_tensor_kappa(kappa);
  return c;
}

void TransportCoefficients::set_tensor_kappa(const Mat3& kappa) {
  validate_kappa_tensor(kappa);
  kappa_tensor = kappa;
}

SymTensorField stress_from_gradients(
    const std::array<std::array<ScalarField, 3>, 3>& dv,
    const ScalarField& eta, const ScalarField& zeta) {
  const ScalarField div_v = dv[0][0] + dv[1][1] + dv[2][2];
  SymTensorField sig(eta.grid());
  for (int i = 0; i < 3; ++i) {
    sig(i, i) = combine(
        [](double e, double z, double dii, double dv) {
          return e * (2.0 * dii - (2.0 / 3.0) * dv) + z * dv;
        },
        eta, zeta, dv[i][i], div_v);
    for (int k = i + 1; k < 3; ++k)
      sig(i, k) = combine(
          [](double e, double dki, double dik) { return e * (dki + dik); },
          eta, dv[k][i], dv[i][k]);
  }
  return sig;
}

SymTensorField stress(const VectorField& v, const TransportCoefficients& coeffs,
                      const ScalarField& p, const ScalarField& T) {
  require_same_grid(v[0], p);
  std::array<std::array<ScalarField, 3>, 3> dv;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) dv[a][b] = diff_or_zero(v[b], a);
  return stress_from_gradients(dv, evaluate_eta(coeffs, p, T),
                               evaluate_zeta(coeffs, p, T));
}

VectorField heat_flux(const ScalarField& T,
                      const TransportCoefficients& coeffs) {
  if (min_value(T) <= 0.0)
    throw NumericalError("heat_flux: nonpositive temperature");
  const VectorField gT = gradient(T);
  VectorField q(T.grid());
  if (coeffs.tensor_mode()) {
    const Mat3& k = *coeffs.kappa_tensor;
    for (int i = 0; i < 3; ++i)
      q[i] = combine(
          [&k, i](double g0, double g1, double g2) {
            return -(k[i][0] * g0 + k[i][1] * g1 + k[i][2] * g2);
          },
          gT[0], gT[1], gT[2]);
  } else {
    const ScalarField kf = evaluate_kappa(coeffs, T);
    for (int i = 0; i < 3; ++i)
      q[i] = combine([](double kv, double g) { return -kv * g; }, kf, gT[i]);
  }
  return q;
}

namespace {

ScalarField checked_nonnegative(ScalarField f, const char* name) {
  for (double x : f.data())
    if (!(x >= 0.0))
      throw NumericalError(std::string("transport: ") + name +
                           " evaluated negative");
  return f;
}

}  // namespace

ScalarField evaluate_eta(const TransportCoefficients& coeffs,
                         const ScalarField& p, const ScalarField& T) {
  if (!coeffs.eta_fn) return ScalarField(p.grid(), coeffs.eta);
  return checked_nonnegative(
      combine([&](double pv, double tv) { return coeffs.eta_fn(pv, tv); }, p,
              T),
      "eta");
}

ScalarField evaluate_zeta(const TransportCoefficients& coeffs,
                          const ScalarField& p, const ScalarField& T) {
  if (!coeffs.zeta_fn) return ScalarField(p.grid(), coeffs.zeta);
  return checked_nonnegative(
      combine([&](double pv, double tv) { return coeffs.zeta_fn(pv, tv); }, p,
              T),
      "zeta");
}

ScalarField evaluate_kappa(const TransportCoefficients& coeffs,
                           const ScalarField& T) {
  if (!coeffs.kappa_fn) return ScalarField(T.grid(), coeffs.kappa);
  return checked_nonnegative(
      combine([&](double tv) { return coeffs.kappa_fn(tv); }, T), "kappa");
}

}  // namespace mns
