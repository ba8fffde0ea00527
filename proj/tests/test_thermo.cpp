#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mns/random_fields.hpp"
#include "mns/thermo.hpp"

using namespace mns;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

const EquationOfState eos = EquationOfState::make(1.4, 1.0, 1.0, 1.0, 0.0);

Grid cube(int N, double L = 1.0) {
  const int dims[3] = {N, N, N};
  const double lens[3] = {L, L, L};
  return Grid::make(dims, lens);
}

}  // namespace

TEST_CASE("reference state reproduces the reference constants") {
  CHECK(eos.temperature(eos.rho_ref, eos.s_ref) ==
        doctest::Approx(eos.T_ref).epsilon(1e-15));
  CHECK(eos.pressure(eos.rho_ref, eos.s_ref) ==
        doctest::Approx((eos.gamma - 1.0) * eos.rho_ref * eos.c_v * eos.T_ref)
            .epsilon(1e-15));
}

TEST_CASE("entropy shift by c_v scales p and T by e") {
  const double p0 = eos.pressure(0.7, 0.2), T0 = eos.temperature(0.7, 0.2);
  CHECK(eos.pressure(0.7, 0.2 + eos.c_v) ==
        doctest::Approx(p0 * std::numbers::e).epsilon(1e-14));
  CHECK(eos.temperature(0.7, 0.2 + eos.c_v) ==
        doctest::Approx(T0 * std::numbers::e).epsilon(1e-14));
}

TEST_CASE("density doubling scales p by 2^gamma") {
  const double p0 = eos.pressure(0.6, -0.1);
  CHECK(eos.pressure(1.2, -0.1) ==
        doctest::Approx(p0 * std::pow(2.0, eos.gamma)).epsilon(1e-13));
}

TEST_CASE("finite differences of U reproduce p/rho^2 and T") {
  const double h = 1e-6;
  for (double rho : {0.5, 1.0, 1.7})
    for (double s : {-0.4, 0.0, 0.8}) {
      const double dU_drho =
          (eos.internal_energy(rho + h, s) - eos.internal_energy(rho - h, s)) /
          (2.0 * h);
      const double dU_ds =
          (eos.internal_energy(rho, s + h) - eos.internal_energy(rho, s - h)) /
          (2.0 * h);
      CHECK(dU_drho ==
            doctest::Approx(eos.pressure(rho, s) / (rho * rho)).epsilon(1e-8));
      CHECK(dU_ds == doctest::Approx(eos.temperature(rho, s)).epsilon(1e-8));
    }
}

TEST_CASE("nonpositive density is rejected naming the node") {
  const Grid g = cube(4);
  ScalarField rho(g, 1.0), s(g, 0.0);
  rho[3] = -0.5;
  CHECK_THROWS_AS((void)pressure(rho, s, eos), NumericalError);
  try {
    (void)pressure(rho, s, eos);
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("node 3") != std::string::npos);
  }
}

TEST_CASE("viscosity tensor contractions") {
  const Mat3 id = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  {
    const ViscosityTensor lam = viscosity_tensor(1.0, 0.0);
    // trace input is annihilated when zeta = 0 (up to the 2/3 rounding)
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double m = 0.0;
        for (int d = 0; d < 3; ++d) m += lam(i, k, d, d);
        CHECK(std::abs(m) <= 1e-15);
      }
  }
  {
    const ViscosityTensor lam = viscosity_tensor(0.0, 1.0);
    CHECK(contract(lam, id, id) == 9.0);
  }
  {
    const ViscosityTensor lam = viscosity_tensor(0.7, 0.3);
    const Mat3 anti = {{{0, 2, -1}, {-2, 0, 3}, {1, -3, 0}}};
    CHECK(contract(lam, anti, anti) == 0.0);  // integer-valued, exact
    // index symmetries
    RandomStream rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const int i = rng.uniform_int(3), k = rng.uniform_int(3);
      const int m = rng.uniform_int(3), n = rng.uniform_int(3);
      CHECK(lam(i, k, m, n) == lam(k, i, m, n));
      CHECK(lam(i, k, m, n) == lam(i, k, n, m));
      CHECK(lam(i, k, m, n) == lam(m, n, i, k));
    }
  }
  CHECK_THROWS_AS((void)viscosity_tensor(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("viscosity tensor quadratic form is positive semidefinite") {
  const ViscosityTensor lam = viscosity_tensor(0.8, 0.4);
  RandomStream rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    Mat3 a;
    double norm2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        a[i][k] = rng.uniform(-1.0, 1.0);
        norm2 += a[i][k] * a[i][k];
      }
    CHECK(contract(lam, a, a) >= -1e-13 * norm2);
  }
  // strictness for a generic matrix
  const Mat3 gen = {{{0.3, 0.1, 0.0}, {-0.2, 0.5, 0.4}, {0.0, 0.1, -0.6}}};
  CHECK(contract(lam, gen, gen) > 1e-3);
}

TEST_CASE("stress: uniform velocity gives exactly zero") {
  const Grid g = cube(6);
  const VectorField v(g, 0.37);
  const ScalarField p(g, 0.4), T(g, 1.0);
  const SymTensorField sig =
      stress(v, TransportCoefficients::make(1.0, 0.5, 0.0, 1.0), p, T);
  for (int c = 0; c < 6; ++c) CHECK(max_abs(sig.comp(c)) == 0.0);
}

TEST_CASE("stress of a shear layer is the single off-diagonal pair") {
  const int dims[2] = {16, 16};
  const double lens[2] = {1.0, 1.0};
  const Grid g = Grid::make(dims, lens);
  VectorField v(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      v[0].at(i, j, 0) = std::sin(two_pi * j / 16.0);
  const ScalarField p(g, 0.4), T(g, 1.0);
  const SymTensorField sig =
      stress(v, TransportCoefficients::make(1.0, 0.0, 0.0, 1.0), p, T);
  const ScalarField expected = central_diff(v[0], 1);
  for (std::size_t n = 0; n < expected.size(); ++n)
    CHECK(sig(0, 1)[n] == expected[n]);
  CHECK(max_abs(sig(0, 0)) == 0.0);
  CHECK(max_abs(sig(1, 1)) == 0.0);
  CHECK(max_abs(sig(2, 2)) == 0.0);
  CHECK(max_abs(sig(0, 2)) == 0.0);
  CHECK(max_abs(sig(1, 2)) == 0.0);
}

TEST_CASE("stress trace is 3 zeta div v; stress equals the Lambda contraction") {
  const Grid g = cube(10);
  const FluidState st = random_smooth_state(g, 1.0, 0.0, 21, 0.5);
  const TransportCoefficients coeffs =
      TransportCoefficients::make(0.7, 0.3, 0.0, 1.0);
  const ScalarField p = pressure(st.rho, st.s, eos);
  const ScalarField T = temperature(st.rho, st.s, eos);
  const SymTensorField sig = stress(st.v, coeffs, p, T);

  std::array<std::array<ScalarField, 3>, 3> dv;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) dv[a][b] = diff_or_zero(st.v[b], a);
  const ScalarField divv = dv[0][0] + dv[1][1] + dv[2][2];

  const ScalarField trace = sig(0, 0) + sig(1, 1) + sig(2, 2);
  const double scale = std::max(max_abs(trace), 0.7 * max_abs(divv));
  for (std::size_t n = 0; n < trace.size(); ++n)
    CHECK(std::abs(trace[n] - 3.0 * 0.3 * divv[n]) <= 1e-13 * scale);

  // node-by-node agreement with Lambda : grad v
  const ViscosityTensor lam = viscosity_tensor(0.7, 0.3);
  const double sig_scale = std::max(
      {max_abs(sig(0, 0)), max_abs(sig(0, 1)), max_abs(sig(1, 2)), 1e-30});
  for (std::size_t n = 0; n < trace.size(); n += 7) {
    Mat3 C;
    for (int m = 0; m < 3; ++m)
      for (int q = 0; q < 3; ++q) C[m][q] = dv[m][q][n];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double v = 0.0;
        for (int m = 0; m < 3; ++m)
          for (int q = 0; q < 3; ++q) v += lam(i, k, m, q) * C[m][q];
        CHECK(std::abs(sig(i, k)[n] - v) <= 1e-14 * sig_scale);
      }
  }
}

TEST_CASE("heat flux closed forms") {
  const Grid g = cube(4);
  SUBCASE("uniform temperature gives zero flux") {
    const VectorField q = heat_flux(
        ScalarField(g, 2.0), TransportCoefficients::make(0.0, 0.0, 0.9, 1.0));
    CHECK(max_abs(q) == 0.0);
  }
  SUBCASE("sinusoidal profile matches the stencil value") {
    const int N = 16;
    const int dims[1] = {N};
    const double lens[1] = {1.0};
    const Grid gx = Grid::make(dims, lens);
    const double kappa = 0.9, epsv = 0.01, h = 1.0 / N;
    ScalarField T(gx);
    for (int i = 0; i < N; ++i)
      T[i] = 2.0 + epsv * std::sin(two_pi * gx.coord(0, i));
    const VectorField q =
        heat_flux(T, TransportCoefficients::make(0.0, 0.0, kappa, 1.0));
    for (int i = 0; i < N; ++i) {
      const double expected = -kappa * epsv *
                              std::cos(two_pi * gx.coord(0, i)) *
                              std::sin(two_pi * h) / h;
      CHECK(q[0][i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("diagonal tensor kappa acts per axis like the scalar") {
    const Grid gc = cube(8);
    RandomStream rng(5);
    SmoothFn f = random_smooth_fn(rng, 3, 0.2);
    f.offset = 2.0;
    const ScalarField T = f.sample(gc);
    const Mat3 diag = {{{0.3, 0, 0}, {0, 0.5, 0}, {0, 0, 0.7}}};
    const VectorField qt = heat_flux(
        T, TransportCoefficients::make_tensor(0.0, 0.0, diag, 1.0));
    const double kd[3] = {0.3, 0.5, 0.7};
    for (int a = 0; a < 3; ++a) {
      const VectorField qs = heat_flux(
          T, TransportCoefficients::make(0.0, 0.0, kd[a], 1.0));
      for (std::size_t n = 0; n < T.size(); ++n)
        CHECK(qt[a][n] == qs[a][n]);
    }
  }
}

TEST_CASE("transport validation") {
  CHECK_THROWS_AS((void)TransportCoefficients::make(-0.1, 0, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)TransportCoefficients::make(0, 0, 0, 0),
                  std::invalid_argument);
  const Mat3 asym = {{{1, 0.2, 0}, {0.1, 1, 0}, {0, 0, 1}}};
  CHECK_THROWS_AS(
      (void)TransportCoefficients::make_tensor(0, 0, asym, 1.0),
      std::invalid_argument);
  const Mat3 indef = {{{1, 0, 0}, {0, 1, 0}, {0, 0, -0.1}}};
  CHECK_THROWS_AS(
      (void)TransportCoefficients::make_tensor(0, 0, indef, 1.0),
      std::invalid_argument);
  const Mat3 ok = {{{1, 0.2, 0}, {0.2, 1, 0}, {0, 0, 0.5}}};
  CHECK_NOTHROW((void)TransportCoefficients::make_tensor(0, 0, ok, 1.0));
}

TEST_CASE("coefficient functions of (p, T) are frozen fields") {
  const Grid g = cube(6);
  const FluidState st = random_smooth_state(g, 1.0, 0.0, 3, 0.4);
  const ScalarField p = pressure(st.rho, st.s, eos);
  const ScalarField T = temperature(st.rho, st.s, eos);
  TransportCoefficients coeffs = TransportCoefficients::make(0, 0, 0, 1);
  coeffs.eta_fn = [](double pv, double Tv) { return 0.1 * pv + 0.02 * Tv; };
  const ScalarField eta = evaluate_eta(coeffs, p, T);
  for (std::size_t n = 0; n < eta.size(); ++n)
    CHECK(eta[n] == 0.1 * p[n] + 0.02 * T[n]);

  coeffs.eta_fn = [](double, double) { return -1.0; };
  CHECK_THROWS_AS((void)evaluate_eta(coeffs, p, T), NumericalError);
}
