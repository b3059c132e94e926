#ifndef PNPH_STRUCTURED_HPP
#define PNPH_STRUCTURED_HPP

#include <array>
#include <cstdint>

#include "pnph/errors.hpp"

namespace pnph {

using index_t = std::int64_t;

/// Uniform cell-centered structured grid in 1, 2 or 3 dimensions.
/// Linear indexing is x-fastest: idx = i + n0*(j + n1*k).
struct StructuredGrid {
  int dim = 2;
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};

  StructuredGrid() = default;
  StructuredGrid(int d, std::array<int, 3> n, std::array<double, 3> len)
      : dim(d), dims(n), lengths(len) {
    if (d < 1 || d > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
    for (int a = 0; a < dim; ++a) {
      if (dims[a] < 1) throw ConfigError("grid dims must be positive");
      if (lengths[a] <= 0.0) throw ConfigError("grid lengths must be positive");
    }
    for (int a = dim; a < 3; ++a) {
      dims[a] = 1;
      lengths[a] = 1.0;
    }
  }

  index_t cell_count() const {
    return static_cast<index_t>(dims[0]) * dims[1] * dims[2];
  }

  double spacing(int axis) const { return lengths[axis] / dims[axis]; }

  /// Measure of the full box (|Y| for reference cells).
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= lengths[a];
    return v;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing(a);
    return v;
  }

  /// Area of a face orthogonal to `axis`.
  double face_area(int axis) const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a)
      if (a != axis) v *= spacing(a);
    return v;
  }

  index_t index(int i, int j = 0, int k = 0) const {
    return i + static_cast<index_t>(dims[0]) * (j + static_cast<index_t>(dims[1]) * k);
  }

  std::array<int, 3> coords(index_t idx) const {
    std::array<int, 3> c;
    c[0] = static_cast<int>(idx % dims[0]);
    idx /= dims[0];
    c[1] = static_cast<int>(idx % dims[1]);
    c[2] = static_cast<int>(idx / dims[1]);
    return c;
  }

  /// Coordinate of the cell center along `axis` for a given index along that axis.
  double center(int axis, int i) const { return (i + 0.5) * spacing(axis); }

  /// Neighbor with periodic wrap-around. dir is -1 or +1.
  index_t periodic_neighbor(index_t idx, int axis, int dir) const {
    std::array<int, 3> c = coords(idx);
    c[axis] += dir;
    if (c[axis] < 0) c[axis] += dims[axis];
    if (c[axis] >= dims[axis]) c[axis] -= dims[axis];
    return index(c[0], c[1], c[2]);
  }

  /// True if the face of cell `idx` in direction (axis, dir) lies on the domain boundary.
  bool on_boundary(index_t idx, int axis, int dir) const {
    const std::array<int, 3> c = coords(idx);
    return (dir < 0) ? (c[axis] == 0) : (c[axis] == dims[axis] - 1);
  }
};

} // namespace pnph

#endif
