#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "mns/field.hpp"
#include "mns/state.hpp"

namespace mns {

/// Seeded random stream with platform-stable double extraction.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    // 53-bit mantissa pulled straight from the engine; avoids the
    // implementation-defined std::uniform_real_distribution.
    const double u = double(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int n) { return int(eng_() % std::uint64_t(n)); }

 private:
  std::mt19937_64 eng_;
};

/// Band-limited smooth periodic function of the fractional coordinates
/// x_a / L_a; the same continuum object can be sampled on any grid, which is
/// what makes refinement sweeps meaningful.
struct SmoothFn {
  struct Mode {
    std::array<int, 3> k;
    double amp;
    double phase;
  };
  double offset = 0.0;
  std::vector<Mode> modes;

  double operator()(double fx, double fy, double fz) const;
  ScalarField sample(const Grid& g) const;
};

/// Draws a SmoothFn with `n_modes` modes, wavenumbers in [-max_wavenumber,
/// max_wavenumber]^3, and amplitudes summing to about `amplitude`.
SmoothFn random_smooth_fn(RandomStream& rng, int n_modes, double amplitude,
                          int max_wavenumber = 2);

/// Random smooth state: rho = rho_ref*(1 + 0.4*A*g1), s = s_ref + 0.5*A*g2,
/// v_a = A*g3a on active axes. Bounded away from vacuum for A <= 1.
FluidState random_smooth_state(const Grid& g, double rho_ref, double s_ref,
                               std::uint64_t seed, double amplitude = 0.3,
                               int max_wavenumber = 2);

}  // namespace mns
