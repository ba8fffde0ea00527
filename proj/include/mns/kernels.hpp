#pragma once

#include <cstddef>
#include <span>

// Low-level data-parallel kernels, in two lanes: mns::kernels is the OpenMP
// lane the library runs on; mns::serial is the plain-loop reference kept for
// testing and benchmarking. Both lanes evaluate identical expressions so the
// outputs agree bitwise. Reductions share one fixed-order pairwise tree, so
// integrals never depend on the thread count.

namespace mns::kernels {

/// Deterministic pairwise sum over a fixed reduction tree.
double pairwise_sum(std::span<const double> x);

/// Second-order centered periodic difference along `axis` on a grid with
/// node counts `dims` (axis-major layout, axis 0 slowest). `inv_2h` is
/// 1/(2*spacing).
void central_diff(const int dims[3], int axis, double inv_2h,
                  std::span<const double> in, std::span<double> out);

/// out[i] = f(in0[i], ins[i]...)
template <class F, class... In>
void zip(std::span<double> out, F f, std::span<const double> in0, In... ins) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(in0[i], ins[i]...);
}

template <class F>
void fill(std::span<double> out, F f) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(i);
}

}  // namespace mns::kernels

namespace mns::serial {

void central_diff(const int dims[3], int axis, double inv_2h,
                  std::span<const double> in, std::span<double> out);

template <class F, class... In>
void zip(std::span<double> out, F f, std::span<const double> in0, In... ins) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(in0[i], ins[i]...);
}

}  // namespace mns::serial
