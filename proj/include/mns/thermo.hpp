#pragma once

#include <array>
#include <functional>
#include <optional>

#include "mns/field.hpp"
#include "mns/state.hpp"

namespace mns {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Ideal-gas-type closure U(rho, s) = c_v T_ref (rho/rho_ref)^(gamma-1)
/// exp((s - s_ref)/c_v), from which p = (gamma-1) rho U and T = U / c_v.
/// Pluggable in principle; everything downstream only uses these three
/// evaluators.
struct EquationOfState {
  double gamma = 1.4;
  double c_v = 1.0;
  double rho_ref = 1.0;
  double T_ref = 1.0;
  double s_ref = 0.0;

  static EquationOfState make(double gamma, double c_v, double rho_ref,
                              double T_ref, double s_ref);

  double internal_energy(double rho, double s) const;
  double pressure(double rho, double s) const;
  double temperature(double rho, double s) const;
  double sound_speed(double rho, double s) const;
};

/// Pointwise p and T from the equation of state; throws NumericalError
/// naming the first node with nonpositive density.
ScalarField pressure(const ScalarField& rho, const ScalarField& s,
                     const EquationOfState& eos);
ScalarField temperature(const ScalarField& rho, const ScalarField& s,
                        const EquationOfState& eos);

/// Rank-4 viscosity tensor
///   L_ikmn = eta (d_ni d_mk + d_nk d_mi - 2/3 d_ik d_mn) + zeta d_ik d_mn,
/// symmetric under i<->k, m<->n, and (ik)<->(mn).
struct ViscosityTensor {
  double a[3][3][3][3];
  double operator()(int i, int k, int m, int n) const { return a[i][k][m][n]; }
};

ViscosityTensor viscosity_tensor(double eta, double zeta);

/// Full 81-term contraction L_ikmn A_ik B_mn.
double contract(const ViscosityTensor& lam, const Mat3& A, const Mat3& B);

/// Shear/bulk viscosity, conductivity and the bracket constant. Constants by
/// default; eta/zeta may depend pointwise on (p, T) and scalar kappa on T.
/// Tensor kappa must be symmetric with nonnegative eigenvalues and is
/// rejected otherwise at construction.
struct TransportCoefficients {
  double eta = 0.0;
  double zeta = 0.0;
  double kappa = 0.0;
  double lambda = 1.0;
  std::function<double(double p, double T)> eta_fn;   // optional
  std::function<double(double p, double T)> zeta_fn;  // optional
  std::function<double(double T)> kappa_fn;           // optional
  std::optional<Mat3> kappa_tensor;

  static TransportCoefficients make(double eta, double zeta, double kappa,
                                    double lambda);
  static TransportCoefficients make_tensor(double eta, double zeta,
                                           const Mat3& kappa, double lambda);

  void set_tensor_kappa(const Mat3& kappa);  // validates symmetry + PSD
  bool tensor_mode() const { return kappa_tensor.has_value(); }
};

/// Viscous stress sigma_ik = eta (D_k v_i + D_i v_k - 2/3 d_ik D_t v_t)
///                         + zeta d_ik D_t v_t,
/// exactly symmetric by construction; equals the L : grad(v) contraction at
/// every node.
SymTensorField stress(const VectorField& v, const TransportCoefficients& coeffs,
                      const ScalarField& p, const ScalarField& T);

/// Same algebra on precomputed velocity gradients dv[a][b] = D_a v_b and
/// evaluated coefficient fields.
SymTensorField stress_from_gradients(
    const std::array<std::array<ScalarField, 3>, 3>& dv,
    const ScalarField& eta, const ScalarField& zeta);

/// Conductive heat flux q_k = -kappa D_k T (scalar) or q_i = -kappa_ij D_j T
/// (tensor). Requires T > 0.
VectorField heat_flux(const ScalarField& T, const TransportCoefficients& coeffs);

/// Coefficient fields frozen for one bracket/RHS evaluation.
ScalarField evaluate_eta(const TransportCoefficients& coeffs,
                         const ScalarField& p, const ScalarField& T);
ScalarField evaluate_zeta(const TransportCoefficients& coeffs,
                          const ScalarField& p, const ScalarField& T);
ScalarField evaluate_kappa(const TransportCoefficients& coeffs,
                           const ScalarField& T);

}  // namespace mns
