#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace mns {

/// Periodic uniform structured grid with 1-3 active axes.
///
/// An axis is active when it carries more than one node; inactive axes hold a
/// single node and drop out of differencing and quadrature. Active axes need
/// at least 4 nodes so the centered stencil and its checkerboard null mode
/// are well defined. Storage order is axis-major: axis 0 varies slowest.
struct Grid {
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};

  /// Validating factory; `dims`/`lengths` list 1-3 axes (trailing axes
  /// default to inactive). Each listed dim must be 1 or >= 4.
  static Grid make(std::span<const int> dims, std::span<const double> lengths);

  bool active(int axis) const { return dims[axis] > 1; }
  int rank() const { return int(active(0)) + int(active(1)) + int(active(2)); }
  double spacing(int axis) const { return lengths[axis] / dims[axis]; }
  double min_spacing() const;
  /// Constant quadrature weight: the cell volume over active axes.
  double cell_volume() const;
  std::size_t size() const {
    return std::size_t(dims[0]) * dims[1] * dims[2];
  }

  std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * dims[1] + j) * dims[2] + k;
  }
  double coord(int axis, int i) const { return spacing(axis) * i; }

  bool operator==(const Grid&) const = default;
};

}  // namespace mns
