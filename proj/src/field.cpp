#include "mns/field.hpp"

#include <cmath>

namespace mns {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::zip(data(), [](double x, double y) { return x + y; }, data(),
               o.data());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::zip(data(), [](double x, double y) { return x - y; }, data(),
               o.data());
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::zip(data(), [](double x, double y) { return x * y; }, data(),
               o.data());
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  kernels::zip(data(), [c](double x) { return c * x; }, data());
  return *this;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int c = 0; c < 3; ++c) (*this)[c] += o[c];
  return *this;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine([](double x, double y) { return x + y; }, a, b);
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine([](double x, double y) { return x - y; }, a, b);
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return combine([](double x, double y) { return x * y; }, a, b);
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return combine([](double x, double y) { return x / y; }, a, b);
}
ScalarField operator*(double c, const ScalarField& a) {
  return combine([c](double x) { return c * x; }, a);
}

ScalarField central_diff(const ScalarField& f, int axis) {
  if (axis < 0 || axis > 2 || !f.grid().active(axis))
    throw std::invalid_argument("axis not active");
  ScalarField out(f.grid());
  const double inv_2h = 1.0 / (2.0 * f.grid().spacing(axis));
  kernels::central_diff(f.grid().dims.data(), axis, inv_2h, f.data(),
                        out.data());
  return out;
}

ScalarField diff_or_zero(const ScalarField& f, int axis) {
  if (!f.grid().active(axis)) return ScalarField(f.grid());
  return central_diff(f, axis);
}

VectorField gradient(const ScalarField& f) {
  VectorField g(f.grid());
  for (int a = 0; a < 3; ++a) g[a] = diff_or_zero(f, a);
  return g;
}

ScalarField divergence(const VectorField& u) {
  ScalarField d(u.grid());
  for (int a = 0; a < 3; ++a)
    if (u.grid().active(a)) d += central_diff(u[a], a);
  return d;
}

VectorField curl(const VectorField& u) {
  VectorField w(u.grid());
  w[0] = diff_or_zero(u[2], 1) - diff_or_zero(u[1], 2);
  w[1] = diff_or_zero(u[0], 2) - diff_or_zero(u[2], 0);
  w[2] = diff_or_zero(u[1], 0) - diff_or_zero(u[0], 1);
  return w;
}

double integrate(const ScalarField& f) {
  return f.grid().cell_volume() * kernels::pairwise_sum(f.data());
}

double inner(const ScalarField& a, const ScalarField& b) {
  return integrate(a * b);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.data()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const VectorField& f) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, max_abs(f[c]));
  return m;
}

double min_value(const ScalarField& f) {
  double m = f.data()[0];
  for (double x : f.data()) m = std::min(m, x);
  return m;
}

bool all_finite(const ScalarField& f) {
  for (double x : f.data())
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const VectorField& f) {
  return all_finite(f[0]) && all_finite(f[1]) && all_finite(f[2]);
}

}  // namespace mns
