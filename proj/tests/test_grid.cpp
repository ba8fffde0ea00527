#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mns/field.hpp"
#include "mns/random_fields.hpp"

using namespace mns;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Grid grid3(int nx, int ny, int nz, double lx = 1.0, double ly = 1.3,
           double lz = 0.7) {
  const int dims[3] = {nx, ny, nz};
  const double lens[3] = {lx, ly, lz};
  return Grid::make(dims, lens);
}

ScalarField smooth(const Grid& g, std::uint64_t seed, double offset = 0.4) {
  RandomStream rng(seed);
  SmoothFn f = random_smooth_fn(rng, 4, 1.0);
  f.offset = offset;
  return f.sample(g);
}

}  // namespace

TEST_CASE("grid validation and geometry") {
  const Grid g = grid3(8, 12, 16);
  CHECK(g.rank() == 3);
  CHECK(g.size() == 8 * 12 * 16);
  CHECK(g.spacing(0) == doctest::Approx(1.0 / 8).epsilon(1e-15));
  CHECK(g.spacing(1) == doctest::Approx(1.3 / 12).epsilon(1e-15));
  CHECK(g.cell_volume() ==
        doctest::Approx((1.0 / 8) * (1.3 / 12) * (0.7 / 16)).epsilon(1e-15));

  const int dims2[2] = {16, 16};
  const double lens2[2] = {1.0, 2.0};
  const Grid g2 = Grid::make(dims2, lens2);
  CHECK(g2.rank() == 2);
  CHECK(!g2.active(2));
  CHECK(g2.cell_volume() == doctest::Approx((1.0 / 16) * (2.0 / 16)));

  const int bad[1] = {3};
  const double one[1] = {1.0};
  CHECK_THROWS_AS((void)Grid::make(bad, one), std::invalid_argument);
  const int ok[1] = {4};
  const double neg[1] = {-1.0};
  CHECK_THROWS_AS((void)Grid::make(ok, neg), std::invalid_argument);
}

TEST_CASE("derivative of a constant is exactly zero") {
  const Grid g = grid3(8, 8, 8);
  const ScalarField c(g, 3.25);
  for (int a = 0; a < 3; ++a) {
    const ScalarField d = central_diff(c, a);
    for (std::size_t n = 0; n < d.size(); ++n) CHECK(d[n] == 0.0);
  }
}

TEST_CASE("centered stencil on a sine matches the closed form") {
  // (sin(k(x+h)) - sin(k(x-h))) / 2h = cos(kx) sin(kh)/h
  const int N = 16;
  const double L = 1.0;
  const int dims[1] = {N};
  const double lens[1] = {L};
  const Grid g = Grid::make(dims, lens);
  const double k = two_pi / L, h = L / N;

  ScalarField f(g);
  for (int i = 0; i < N; ++i) f[i] = std::sin(k * g.coord(0, i));
  const ScalarField d = central_diff(f, 0);
  for (int i = 0; i < N; ++i) {
    const double expected = std::cos(k * g.coord(0, i)) * std::sin(k * h) / h;
    CHECK(d[i] == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("checkerboard is the null mode of the centered stencil") {
  const Grid g = grid3(8, 12, 16);
  ScalarField f(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 16; ++k)
        f.at(i, j, k) = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;
  for (int a = 0; a < 3; ++a) {
    const ScalarField d = central_diff(f, a);
    for (std::size_t n = 0; n < d.size(); ++n) CHECK(d[n] == 0.0);
  }
}

TEST_CASE("summation by parts holds to near roundoff on every axis") {
  const Grid g = grid3(8, 12, 16);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ScalarField f = smooth(g, 10 + seed);
    const ScalarField d = smooth(g, 20 + seed, -0.3);
    for (int a = 0; a < 3; ++a) {
      const ScalarField df = central_diff(f, a);
      const ScalarField dd = central_diff(d, a);
      const double lhs = inner(f, dd);
      const double rhs = inner(df, d);
      // Cauchy-Schwarz scale: the raw inner products often vanish by mode
      // orthogonality, so they cannot normalize their own defect.
      const double scale = std::sqrt(inner(f, f) * inner(dd, dd)) +
                           std::sqrt(inner(df, df) * inner(d, d));
      CHECK(std::abs(lhs + rhs) / scale <= 1e-13);
    }
  }
}

TEST_CASE("integral of any derivative vanishes (periodicity)") {
  const Grid g = grid3(8, 12, 16);
  const ScalarField f = smooth(g, 33);
  for (int a = 0; a < 3; ++a) {
    const ScalarField d = central_diff(f, a);
    const double scale = std::max(1.0, max_abs(d));
    CHECK(std::abs(integrate(d)) <= 1e-13 * scale);
  }
}

TEST_CASE("quadrature: constants and exact sine cancellation") {
  const Grid g = grid3(8, 12, 16);
  const double V = 1.0 * 1.3 * 0.7;
  CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(V).epsilon(1e-14));

  ScalarField f(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 16; ++k)
        f.at(i, j, k) = std::sin(two_pi * i / 8.0);
  CHECK(std::abs(integrate(f)) <= 1e-13);
}

TEST_CASE("curl of a gradient vanishes: mixed differences commute") {
  const Grid g = grid3(12, 12, 12, 1.0, 1.0, 1.0);
  const ScalarField f = smooth(g, 77);
  const VectorField w = curl(gradient(f));
  CHECK(max_abs(w) <= 1e-11);
}

TEST_CASE("divergence of a solenoidal trig field is exactly zero") {
  const int dims[2] = {16, 16};
  const double lens[2] = {1.0, 1.0};
  const Grid g = Grid::make(dims, lens);
  VectorField u(g);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      u[0].at(i, j, 0) = std::sin(two_pi * j / 16.0);  // depends on y only
      u[1].at(i, j, 0) = std::sin(two_pi * i / 16.0);  // depends on x only
    }
  const ScalarField d = divergence(u);
  for (std::size_t n = 0; n < d.size(); ++n) CHECK(d[n] == 0.0);
}

TEST_CASE("second-order accuracy: error drops 4x when N doubles") {
  auto stencil_error = [](int N) {
    const int dims[1] = {N};
    const double lens[1] = {1.0};
    const Grid g = Grid::make(dims, lens);
    ScalarField f(g);
    for (int i = 0; i < N; ++i) f[i] = std::sin(two_pi * g.coord(0, i));
    const ScalarField d = central_diff(f, 0);
    double err = 0.0;
    for (int i = 0; i < N; ++i)
      err = std::max(err, std::abs(d[i] - two_pi *
                                            std::cos(two_pi * g.coord(0, i))));
    return err;
  };
  const double r1 = stencil_error(16) / stencil_error(32);
  const double r2 = stencil_error(32) / stencil_error(64);
  CHECK(r1 == doctest::Approx(4.0).epsilon(0.075));
  CHECK(r2 == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("inactive axis is rejected with the documented message") {
  const int dims[2] = {8, 8};
  const double lens[2] = {1.0, 1.0};
  const Grid g = Grid::make(dims, lens);
  const ScalarField f(g, 1.0);
  CHECK_THROWS_WITH_AS((void)central_diff(f, 2), "axis not active",
                       std::invalid_argument);
  // but the zero-extension is fine
  CHECK(max_abs(diff_or_zero(f, 2)) == 0.0);
}

TEST_CASE("grid mismatch is rejected") {
  const Grid a = grid3(8, 8, 8);
  const Grid b = grid3(8, 8, 12);
  CHECK_THROWS_AS((void)(ScalarField(a, 1.0) + ScalarField(b, 1.0)),
                  std::invalid_argument);
}
