#include "mns/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace mns {

double SmoothFn::operator()(double fx, double fy, double fz) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double v = offset;
  for (const Mode& m : modes)
    v += m.amp * std::cos(two_pi * (m.k[0] * fx + m.k[1] * fy + m.k[2] * fz) +
                          m.phase);
  return v;
}

ScalarField SmoothFn::sample(const Grid& g) const {
  ScalarField out(g);
  const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k)
        out.at(i, j, k) = (*this)(double(i) / nx, double(j) / ny,
                                  double(k) / nz);
  return out;
}

SmoothFn random_smooth_fn(RandomStream& rng, int n_modes, double amplitude,
                          int max_wavenumber) {
  SmoothFn f;
  f.offset = 0.0;
  const double per_mode = amplitude / n_modes;
  for (int m = 0; m < n_modes; ++m) {
    SmoothFn::Mode mode;
    // Wavenumbers are drawn on all three axes; components along inactive
    // axes are harmless because the fractional coordinate there is 0.
    do {
      for (int a = 0; a < 3; ++a)
        mode.k[a] = rng.uniform_int(2 * max_wavenumber + 1) - max_wavenumber;
    } while (mode.k[0] == 0 && mode.k[1] == 0 && mode.k[2] == 0);
    mode.amp = per_mode * rng.uniform(0.5, 1.0);
    mode.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    f.modes.push_back(mode);
  }
  return f;
}

FluidState random_smooth_state(const Grid& g, double rho_ref, double s_ref,
                               std::uint64_t seed, double amplitude,
                               int max_wavenumber) {
  RandomStream rng(seed);
  const SmoothFn g_rho = random_smooth_fn(rng, 4, 1.0, max_wavenumber);
  const SmoothFn g_s = random_smooth_fn(rng, 4, 1.0, max_wavenumber);
  const SmoothFn g_v[3] = {random_smooth_fn(rng, 4, 1.0, max_wavenumber),
                           random_smooth_fn(rng, 4, 1.0, max_wavenumber),
                           random_smooth_fn(rng, 4, 1.0, max_wavenumber)};

  FluidState st;
  st.rho = combine([&](double x) { return rho_ref * (1.0 + 0.4 * amplitude * x); },
                   g_rho.sample(g));
  st.s = combine([&](double x) { return s_ref + 0.5 * amplitude * x; },
                 g_s.sample(g));
  st.v = VectorField(g);
  for (int a = 0; a < 3; ++a)
    if (g.active(a)) st.v[a] = combine([&](double x) { return amplitude * x; },
                                       g_v[a].sample(g));
  validate_state(st);
  return st;
}

}  // namespace mns
