#include "mns/kernels.hpp"

namespace mns {
namespace {

double pairwise(const double* x, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(x, h) + pairwise(x + h, n - h);
}

}  // namespace

namespace kernels {

double pairwise_sum(std::span<const double> x) {
  return pairwise(x.data(), x.size());
}

void central_diff(const int dims[3], int axis, double inv_2h,
                  std::span<const double> in, std::span<double> out) {
  const int nx = dims[0], ny = dims[1], nz = dims[2];
  const int n = dims[axis];
  const std::ptrdiff_t stride[3] = {std::ptrdiff_t(ny) * nz, nz, 1};
  const std::ptrdiff_t s = stride[axis];
  const std::ptrdiff_t wrap = std::ptrdiff_t(n - 1) * s;
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const std::size_t idx = (std::size_t(i) * ny + j) * nz + k;
        const int a = (axis == 0) ? i : (axis == 1) ? j : k;
        const double fp = in[a + 1 < n ? idx + s : idx - wrap];
        const double fm = in[a > 0 ? idx - s : idx + wrap];
        out[idx] = (fp - fm) * inv_2h;
      }
}

}  // namespace kernels

namespace serial {

void central_diff(const int dims[3], int axis, double inv_2h,
                  std::span<const double> in, std::span<double> out) {
  const int nx = dims[0], ny = dims[1], nz = dims[2];
  const int n = dims[axis];
  const std::ptrdiff_t stride[3] = {std::ptrdiff_t(ny) * nz, nz, 1};
  const std::ptrdiff_t s = stride[axis];
  const std::ptrdiff_t wrap = std::ptrdiff_t(n - 1) * s;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const std::size_t idx = (std::size_t(i) * ny + j) * nz + k;
        const int a = (axis == 0) ? i : (axis == 1) ? j : k;
        const double fp = in[a + 1 < n ? idx + s : idx - wrap];
        const double fm = in[a > 0 ? idx - s : idx + wrap];
        out[idx] = (fp - fm) * inv_2h;
      }
}

}  // namespace serial
}  // namespace mns
