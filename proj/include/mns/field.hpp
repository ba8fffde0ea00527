#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "mns/grid.hpp"
#include "mns/kernels.hpp"

namespace mns {

/// One real value per grid node.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double value = 0.0)
      : grid_(g), data_(g.size(), value) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  double operator[](std::size_t n) const { return data_[n]; }
  double& operator[](std::size_t n) { return data_[n]; }
  double at(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }
  double& at(int i, int j, int k) { return data_[grid_.index(i, j, k)]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double c);

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// Three real components per grid node. Components along inactive axes are
/// carried but conventionally zero.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& g, double value = 0.0)
      : comp_{ScalarField(g, value), ScalarField(g, value),
              ScalarField(g, value)} {}

  const Grid& grid() const { return comp_[0].grid(); }
  ScalarField& operator[](int c) { return comp_[c]; }
  const ScalarField& operator[](int c) const { return comp_[c]; }

  VectorField& operator+=(const VectorField& o);

 private:
  std::array<ScalarField, 3> comp_;
};

/// Symmetric rank-2 tensor field; six stored components, bitwise symmetric
/// by construction.
class SymTensorField {
 public:
  SymTensorField() = default;
  explicit SymTensorField(const Grid& g)
      : c_{ScalarField(g), ScalarField(g), ScalarField(g),
           ScalarField(g), ScalarField(g), ScalarField(g)} {}

  const Grid& grid() const { return c_[0].grid(); }
  /// Component order: xx, yy, zz, xy, xz, yz.
  ScalarField& comp(int slot) { return c_[slot]; }
  const ScalarField& comp(int slot) const { return c_[slot]; }
  ScalarField& operator()(int i, int k) { return c_[slot(i, k)]; }
  const ScalarField& operator()(int i, int k) const { return c_[slot(i, k)]; }

  static int slot(int i, int k) {
    if (i == k) return i;
    const int a = i < k ? i : k, b = i < k ? k : i;
    return a == 0 ? (b == 1 ? 3 : 4) : 5;
  }

 private:
  std::array<ScalarField, 6> c_;
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Pointwise combination out[n] = f(fields[n]...). All fields must share a
/// grid.
template <class F, class... Fs>
ScalarField combine(F f, const ScalarField& first, const Fs&... rest) {
  (require_same_grid(first, rest), ...);
  ScalarField out(first.grid());
  kernels::zip(out.data(), f, first.data(), rest.data()...);
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);

// ---- difference operators -------------------------------------------------

/// Centered periodic difference along an active axis; throws
/// std::invalid_argument("axis not active") otherwise.
ScalarField central_diff(const ScalarField& f, int axis);

/// Same, but an inactive axis yields the zero field (fields are constant
/// along inactive axes).
ScalarField diff_or_zero(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
VectorField curl(const VectorField& u);

// ---- quadrature ------------------------------------------------------------

/// Quadrature-weighted sum with a fixed deterministic reduction order.
double integrate(const ScalarField& f);
/// Quadrature inner product, same reduction order.
double inner(const ScalarField& a, const ScalarField& b);

double max_abs(const ScalarField& f);
double max_abs(const VectorField& f);
double min_value(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace mns
