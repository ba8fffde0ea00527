#include "mns/grid.hpp"

#include <stdexcept>
#include <string>

namespace mns {

Grid Grid::make(std::span<const int> dims, std::span<const double> lengths) {
  if (dims.empty() || dims.size() > 3)
    throw std::invalid_argument("grid: need 1-3 axes");
  if (lengths.size() != dims.size())
    throw std::invalid_argument("grid: dims/lengths size mismatch");
  Grid g;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (dims[a] != 1 && dims[a] < 4)
      throw std::invalid_argument("grid: axis " + std::to_string(a) +
                                  " needs >= 4 nodes (or 1 if inactive)");
    if (!(lengths[a] > 0.0))
      throw std::invalid_argument("grid: axis " + std::to_string(a) +
                                  " length must be positive");
    g.dims[a] = dims[a];
    g.lengths[a] = lengths[a];
  }
  // Inactive axes keep unit length so they do not weight the quadrature.
  for (std::size_t a = dims.size(); a < 3; ++a) {
    g.dims[a] = 1;
    g.lengths[a] = 1.0;
  }
  if (g.rank() == 0) throw std::invalid_argument("grid: no active axis");
  return g;
}

double Grid::min_spacing() const {
  double h = 0.0;
  bool first = true;
  for (int a = 0; a < 3; ++a) {
    if (!active(a)) continue;
    const double ha = spacing(a);
    if (first || ha < h) h = ha;
    first = false;
  }
  return h;
}

double Grid::cell_volume() const {
  double w = 1.0;
  for (int a = 0; a < 3; ++a)
    if (active(a)) w *= spacing(a);
  return w;
}

}  // namespace mns
