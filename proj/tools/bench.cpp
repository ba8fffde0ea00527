// Kernel benchmark: OpenMP lane vs the serial reference lane on the hot
// loops (stencil, pointwise algebra, quadrature). Build and run manually:
//   ./mns-bench [N] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mns/field.hpp"
#include "mns/random_fields.hpp"

using namespace mns;

namespace {

template <class F>
double time_best(int reps, F body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 96;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 7;
  const int dims[3] = {N, N, N};
  const double lens[3] = {1.0, 1.0, 1.0};
  const Grid g = Grid::make(dims, lens);

  RandomStream rng(7);
  const ScalarField a = random_smooth_fn(rng, 6, 1.0).sample(g);
  const ScalarField b = random_smooth_fn(rng, 6, 1.0).sample(g);
  ScalarField out(g);

#ifdef _OPENMP
  std::printf("grid %d^3, %d reps, %d OpenMP threads\n", N, reps,
              omp_get_max_threads());
#else
  std::printf("grid %d^3, %d reps, OpenMP not enabled\n", N, reps);
#endif
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]",
              "speedup");

  auto report = [&](const char* name, double ts, double tp) {
    std::printf("%-22s %12.3f %12.3f %8.2fx\n", name, 1e3 * ts, 1e3 * tp,
                ts / tp);
  };

  {
    const double inv2h = 1.0 / (2.0 * g.spacing(0));
    const double t_ser = time_best(reps, [&] {
      serial::central_diff(g.dims.data(), 0, inv2h, a.data(), out.data());
    });
    const double t_par = time_best(reps, [&] {
      kernels::central_diff(g.dims.data(), 0, inv2h, a.data(), out.data());
    });
    report("central_diff (x)", t_ser, t_par);
  }
  {
    auto mul = [](double x, double y) { return x * y; };
    const double t_ser = time_best(
        reps, [&] { serial::zip(out.data(), mul, a.data(), b.data()); });
    const double t_par = time_best(
        reps, [&] { kernels::zip(out.data(), mul, a.data(), b.data()); });
    report("pointwise multiply", t_ser, t_par);
  }
  {
    auto fma = [](double x, double y, double z) { return x + 0.37 * y * z; };
    const double t_ser = time_best(reps, [&] {
      serial::zip(out.data(), fma, a.data(), b.data(), out.data());
    });
    const double t_par = time_best(reps, [&] {
      kernels::zip(out.data(), fma, a.data(), b.data(), out.data());
    });
    report("fused multiply-add", t_ser, t_par);
  }
  {
    // The reduction tree itself is shared (it fixes the summation order);
    // the lanes differ in how the integrand is formed.
    volatile double sink = 0.0;
    auto mul = [](double x, double y) { return x * y; };
    const double t_ser = time_best(reps, [&] {
      serial::zip(out.data(), mul, a.data(), b.data());
      sink = kernels::pairwise_sum(out.data());
    });
    const double t_par = time_best(reps, [&] {
      kernels::zip(out.data(), mul, a.data(), b.data());
      sink = kernels::pairwise_sum(out.data());
    });
    (void)sink;
    report("inner product", t_ser, t_par);
  }
  return 0;
}
