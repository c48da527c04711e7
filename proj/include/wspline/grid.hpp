#pragma once

#include <compare>

#include "wspline/errors.hpp"

namespace wspline {

/// Uniform cell grid on [0,1]^2. Atoms live at cell centers, so all support
/// points are strictly inside the unit square. Storage is row-major with the
/// x-index fastest: flat index = iy * width + ix.
struct Grid2 {
  int width = 0;   // number of cells along x (M)
  int height = 0;  // number of cells along y (N)

  Grid2() = default;
  Grid2(int m, int n) : width(m), height(n) {
    if (m < 3 || n < 3) throw ConfigError("Grid2: width and height must be >= 3");
  }

  int cells() const { return width * height; }
  double dx() const { return 1.0 / width; }
  double dy() const { return 1.0 / height; }
  double center_x(int ix) const { return (ix + 0.5) / width; }
  double center_y(int iy) const { return (iy + 0.5) / height; }
  int index(int ix, int iy) const { return iy * width + ix; }

  bool operator==(const Grid2&) const = default;
};

}  // namespace wspline
