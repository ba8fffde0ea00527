#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mns/checks.hpp"
#include "mns/dynamics.hpp"
#include "mns/random_fields.hpp"

using namespace mns;

namespace {

const EquationOfState eos = EquationOfState::make(1.4, 1.0, 1.0, 0.8, 0.0);
// Nonunit lambda on purpose; it must drop out of all identities.
const TransportCoefficients coeffs =
    TransportCoefficients::make(0.3, 0.2, 0.4, 1.3);

Grid cube(int N) {
  const int dims[3] = {N, N, N};
  const double lens[3] = {1.0, 1.3, 0.8};
  return Grid::make(dims, lens);
}

BracketContext test_context(std::uint64_t seed = 5) {
  const Grid g = cube(12);
  return make_context(random_smooth_state(g, eos.rho_ref, eos.s_ref, seed),
                      eos, coeffs);
}

}  // namespace

TEST_CASE("Poisson bracket is antisymmetric and vanishes on the diagonal") {
  const BracketContext ctx = test_context();
  const auto r = checks::bracket_algebra(ctx, 50, 100);
  CHECK(r.max_antisym_defect <= 1e-12);
  CHECK(r.max_self_defect <= 1e-12);
  CHECK(r.metric_bitwise_symmetric);
}

TEST_CASE("mass and affine entropy are discrete Casimirs") {
  const BracketContext ctx = test_context();
  const PoissonSlot m = make_poisson_slot(ctx, mass());
  const PoissonSlot ent = make_poisson_slot(
      ctx, generalized_entropy(EntropyProfile::polynomial({0.7, 2.0})));
  for (int i = 0; i < 20; ++i) {
    const PoissonSlot g = make_poisson_slot(ctx, random_test_functional(200 + i));
    const double dm = std::abs(poisson_bracket(ctx, m, g)) /
                      poisson_bracket_gross(ctx, m, g);
    const double de = std::abs(poisson_bracket(ctx, ent, g)) /
                      poisson_bracket_gross(ctx, ent, g);
    CHECK(dm <= 1e-11);
    CHECK(de <= 1e-11);
  }
}

TEST_CASE("nonlinear entropy Casimir defect is real and second order") {
  const BracketContext ctx = test_context();
  const PoissonSlot ent = make_poisson_slot(
      ctx, generalized_entropy(EntropyProfile::polynomial({0.0, 0.0, 1.0})));
  const PoissonSlot g = make_poisson_slot(ctx, random_test_functional(301));
  const double defect = std::abs(poisson_bracket(ctx, ent, g)) /
                        poisson_bracket_gross(ctx, ent, g);
  CHECK(defect > 1e-8);  // genuinely nonzero at N=12

  const auto r = checks::casimir_refinement(
      eos, coeffs, EntropyProfile::polynomial({0.0, 0.0, 1.0}), 400);
  CHECK(r.order > 1.7);
  CHECK(r.order < 2.3);
}

TEST_CASE("energy degeneracy of the metric bracket is roundoff-deep") {
  const BracketContext ctx = test_context();
  const MetricSlot ham = make_metric_slot(ctx, hamiltonian(eos));
  for (int i = 0; i < 20; ++i) {
    const MetricSlot g = make_metric_slot(ctx, random_test_functional(500 + i));
    const double defect = std::abs(metric_bracket(ctx, ham, g)) /
                          metric_bracket_gross(ctx, ham, g);
    CHECK(defect <= 1e-11);
  }
}

TEST_CASE("momentum degeneracy of the metric bracket is exact") {
  const BracketContext ctx = test_context();
  for (int j = 0; j < 3; ++j) {
    const MetricSlot pj = make_metric_slot(ctx, momentum(j));
    for (int i = 0; i < 5; ++i) {
      const MetricSlot g =
          make_metric_slot(ctx, random_test_functional(600 + i));
      CHECK(metric_bracket(ctx, pj, g) == 0.0);
    }
  }
}

TEST_CASE("metric bracket is exactly nonnegative on the diagonal") {
  const BracketContext ctx = test_context();
  const EntropyProfile profiles[3] = {
      EntropyProfile::linear(coeffs.lambda),
      EntropyProfile::polynomial({0.0, 0.0, 1.0}),
      EntropyProfile::polynomial({0.0, -1.0, 0.0, 1.0})};
  const auto r = checks::definiteness(ctx, 100, 700, profiles);
  CHECK(r.min_value >= 0.0);
  // strictness for a generic functional
  const MetricSlot f = make_metric_slot(ctx, random_test_functional(701));
  CHECK(metric_bracket(ctx, f, f) > 0.0);
}

TEST_CASE("dissipation off: the metric bracket is identically zero") {
  const Grid g = cube(8);
  const BracketContext ctx =
      make_context(random_smooth_state(g, 1.0, 0.0, 3), eos,
                   TransportCoefficients::make(0.0, 0.0, 0.0, 1.0));
  for (int i = 0; i < 5; ++i) {
    const MetricSlot a = make_metric_slot(ctx, random_test_functional(800 + i));
    const MetricSlot b = make_metric_slot(ctx, random_test_functional(900 + i));
    CHECK(metric_bracket(ctx, a, b) == 0.0);
  }
}

TEST_CASE("weak forms match the scalar brackets") {
  const BracketContext ctx = test_context();
  const auto r = checks::weak_form(ctx, 50, 1000);
  CHECK(r.max_poisson_rel <= 1e-12);
  CHECK(r.max_metric_rel <= 1e-12);
}

TEST_CASE("gpb rhs with the hamiltonian reproduces the continuity stencil") {
  const BracketContext ctx = test_context();
  const Tendency t = poisson_rhs(ctx, hamiltonian(eos));
  VectorField m(ctx.grid());
  for (int k = 0; k < 3; ++k) m[k] = ctx.state.rho * ctx.state.v[k];
  const ScalarField expected =
      combine([](double x) { return -x; }, divergence(m));
  for (std::size_t n = 0; n < expected.size(); ++n)
    CHECK(t.rho[n] == expected[n]);
}

TEST_CASE("uniform state: the full tendency is exactly zero") {
  const Grid g = cube(6);
  const BracketContext ctx =
      make_context(make_uniform_state(g, 1.0, 0.2), eos, coeffs);
  const Tendency t = full_rhs(ctx, EntropyProfile::linear(coeffs.lambda));
  CHECK(max_abs(t.v) == 0.0);
  CHECK(max_abs(t.rho) == 0.0);
  CHECK(max_abs(t.s) == 0.0);
}

TEST_CASE("metric rhs on a shear layer: closed-form dissipative terms") {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int dims[2] = {16, 16};
  const double lens[2] = {1.0, 1.0};
  const Grid g = Grid::make(dims, lens);
  FluidState st = make_uniform_state(g, 1.0, 0.0);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      st.v[0].at(i, j, 0) = 0.1 * std::sin(two_pi * j / 16.0);

  const TransportCoefficients visc =
      TransportCoefficients::make(0.3, 0.2, 0.4, 1.3);
  const BracketContext ctx = make_context(st, eos, visc);
  const Tendency t =
      metric_rhs(ctx, free_energy(eos, EntropyProfile::linear(visc.lambda)));

  // density never moves under the metric bracket
  CHECK(max_abs(t.rho) == 0.0);

  // v_x' = (1/rho) D_y sigma_xy
  const ScalarField expected_vx =
      combine([](double ir, double d) { return ir * d; }, ctx.inv_rho,
              central_diff(ctx.sigma(0, 1), 1));
  const double vscale = max_abs(expected_vx);
  for (std::size_t n = 0; n < expected_vx.size(); ++n)
    CHECK(std::abs(t.v[0][n] - expected_vx[n]) <= 1e-12 * vscale);

  // s' = sigma_xy D_y v_x / (rho T) >= 0 pointwise (T uniform: no heat term)
  const ScalarField dyvx = central_diff(st.v[0], 1);
  const ScalarField expected_s = combine(
      [](double sig, double d, double rt) { return sig * d / rt; },
      ctx.sigma(0, 1), dyvx, ctx.rho_T);
  const double sscale = max_abs(expected_s);
  for (std::size_t n = 0; n < expected_s.size(); ++n) {
    CHECK(std::abs(t.s[n] - expected_s[n]) <= 1e-12 * sscale);
    CHECK(t.s[n] >= -1e-18);
  }
}

TEST_CASE("free-energy path equals entropy path for the full rhs") {
  const BracketContext ctx = test_context();
  const EntropyProfile profile = EntropyProfile::polynomial({0.0, 0.5, 0.3});
  const Tendency a = full_rhs(ctx, profile, DissipationPath::entropy);
  const Tendency b = full_rhs(ctx, profile, DissipationPath::free_energy);
  auto rel = [](const ScalarField& x, const ScalarField& y) {
    const double d = max_abs(x - y);
    const double s = std::max(max_abs(x), max_abs(y));
    return s == 0.0 ? 0.0 : d / s;
  };
  CHECK(rel(a.rho, b.rho) <= 1e-12);
  CHECK(rel(a.s, b.s) <= 1e-12);
  for (int c = 0; c < 3; ++c) CHECK(rel(a.v[c], b.v[c]) <= 1e-12);
}

TEST_CASE("entropy production rate equals the bracket diagonal") {
  const BracketContext ctx = test_context();
  const EntropyProfile profile = EntropyProfile::linear(coeffs.lambda);
  const Functional S = generalized_entropy(profile);
  const MetricSlot ms = make_metric_slot(ctx, S);
  const double rate_weak =
      pair(S.derivative(ctx.state), full_rhs(ctx, profile));
  const double rate_bracket = metric_bracket(ctx, ms, ms);
  CHECK(rate_bracket >= 0.0);
  const double scale =
      std::max(metric_bracket_gross(ctx, ms, ms), std::abs(rate_bracket));
  CHECK(std::abs(rate_weak - rate_bracket) <= 1e-11 * scale);
}

TEST_CASE("full bracket is the sum of its parts") {
  const BracketContext ctx = test_context();
  const Functional F = random_test_functional(41);
  const Functional G = random_test_functional(42);
  CHECK(full_bracket(ctx, F, G) ==
        poisson_bracket(ctx, F, G) + metric_bracket(ctx, F, G));
}

TEST_CASE("the three metric-bracket forms agree") {
  const BracketContext ctx = test_context();
  const auto r = checks::forms_agreement(ctx, 20, 1100);
  CHECK(r.max_tensor_form_rel <= 1e-12);
  CHECK(r.max_stress_form_rel <= 1e-11);
}

TEST_CASE("tensor conductivity: symmetric pairing, definiteness, weak form") {
  const Mat3 kt = {{{0.5, 0.1, 0.0}, {0.1, 0.4, 0.05}, {0.0, 0.05, 0.6}}};
  const TransportCoefficients tensor_coeffs =
      TransportCoefficients::make_tensor(0.3, 0.2, kt, 1.3);
  const Grid g = cube(10);
  const BracketContext ctx =
      make_context(random_smooth_state(g, 1.0, 0.0, 8), eos, tensor_coeffs);

  const MetricSlot a = make_metric_slot(ctx, random_test_functional(1));
  const MetricSlot b = make_metric_slot(ctx, random_test_functional(2));
  CHECK(metric_bracket(ctx, a, b) == metric_bracket(ctx, b, a));
  CHECK(metric_bracket(ctx, a, a) >= -1e-13 * metric_bracket_gross(ctx, a, a));

  const auto wf = checks::weak_form(ctx, 10, 1200);
  CHECK(wf.max_metric_rel <= 1e-12);
}

TEST_CASE("Onsager: asymmetric conductivity breaks symmetry linearly") {
  const BracketContext ctx = test_context();
  const auto r = checks::onsager_defect(ctx, 1300);
  CHECK(r.r_squared >= 0.999);
  // and the defect really grows with the asymmetric part
  CHECK(std::abs(r.defects[4]) > 100.0 * std::abs(r.defects[1]));
}

TEST_CASE("degeneracy report flags and formats") {
  const BracketContext ctx = test_context();
  const DegeneracyReport rep =
      degeneracy_report(ctx, EntropyProfile::linear(coeffs.lambda), 10, 1400);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.all_pass());
  std::ostringstream os;
  rep.write_csv(os);
  CHECK(os.str().find("identity,n_samples,max_normalized_defect,pass") !=
        std::string::npos);
  CHECK(os.str().find("sym_energy_degeneracy") != std::string::npos);
}

TEST_CASE("context construction rejects nonpositive density") {
  const Grid g = cube(6);
  FluidState st = make_uniform_state(g, 1.0, 0.0);
  st.rho[10] = -1.0;
  CHECK_THROWS_AS((void)make_context(st, eos, coeffs), NumericalError);
}
