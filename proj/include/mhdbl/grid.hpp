#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "mhdbl/errors.hpp"

namespace mhdbl {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Periodic-in-x, truncated-half-line-in-y grid.  x has nx nodes on [0, 2pi);
// y has ny nodes on [0, y_max] including both boundaries.
struct GridSpec {
  int nx = 64;
  int ny = 256;
  double y_max = 20.0;

  double dx() const { return kTwoPi / nx; }
  double dy() const { return y_max / (ny - 1); }
  double x(int ix) const { return dx() * ix; }
  double y(int iy) const { return dy() * iy; }

  void validate() const {
    if (nx < 8) throw construction_error("grid: nx >= 8 required, got " + std::to_string(nx));
    if (ny < 16) throw construction_error("grid: ny >= 16 required, got " + std::to_string(ny));
    if (!(y_max >= 10.0))
      throw construction_error("grid: y_max >= 10 required to resolve far-field decay");
  }

  bool operator==(const GridSpec&) const = default;
};

// Dense scalar field on a GridSpec.  Column-major: the y index runs fastest,
// so per-column (fixed x) data is contiguous for the implicit solves.
struct Field {
  int nx = 0;
  int ny = 0;
  std::vector<double> data;

  Field() = default;
  Field(int nx_, int ny_) : nx(nx_), ny(ny_), data(static_cast<size_t>(nx_) * ny_, 0.0) {}
  explicit Field(const GridSpec& g) : Field(g.nx, g.ny) {}

  double& operator()(int ix, int iy) { return data[static_cast<size_t>(ix) * ny + iy]; }
  double operator()(int ix, int iy) const { return data[static_cast<size_t>(ix) * ny + iy]; }

  double* column(int ix) { return data.data() + static_cast<size_t>(ix) * ny; }
  const double* column(int ix) const { return data.data() + static_cast<size_t>(ix) * ny; }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }
  double min() const {
    double m = data.empty() ? 0.0 : data[0];
    for (double v : data) m = std::min(m, v);
    return m;
  }
};

}  // namespace mhdbl
