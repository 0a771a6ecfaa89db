#pragma once

#include "mhdbl/grid.hpp"

namespace mhdbl {

// Second-order stencils on a GridSpec.  x is periodic (central differences);
// y uses central differences in the interior and one-sided second-order
// closures at both ends.

inline Field ddx(const Field& f, const GridSpec& g) {
  Field r(g);
  const double i2dx = 1.0 / (2.0 * g.dx());
  for (int ix = 0; ix < g.nx; ++ix) {
    const int ip = (ix + 1) % g.nx;
    const int im = (ix + g.nx - 1) % g.nx;
    const double* cp = f.column(ip);
    const double* cm = f.column(im);
    double* out = r.column(ix);
    for (int iy = 0; iy < g.ny; ++iy) out[iy] = (cp[iy] - cm[iy]) * i2dx;
  }
  return r;
}

inline Field ddy(const Field& f, const GridSpec& g) {
  Field r(g);
  const double i2dy = 1.0 / (2.0 * g.dy());
  const int n = g.ny;
  for (int ix = 0; ix < g.nx; ++ix) {
    const double* c = f.column(ix);
    double* out = r.column(ix);
    out[0] = (-3.0 * c[0] + 4.0 * c[1] - c[2]) * i2dy;
    for (int iy = 1; iy < n - 1; ++iy) out[iy] = (c[iy + 1] - c[iy - 1]) * i2dy;
    out[n - 1] = (3.0 * c[n - 1] - 4.0 * c[n - 2] + c[n - 3]) * i2dy;
  }
  return r;
}

inline Field d2y(const Field& f, const GridSpec& g) {
  Field r(g);
  const double idy2 = 1.0 / (g.dy() * g.dy());
  const int n = g.ny;
  for (int ix = 0; ix < g.nx; ++ix) {
    const double* c = f.column(ix);
    double* out = r.column(ix);
    out[0] = (2.0 * c[0] - 5.0 * c[1] + 4.0 * c[2] - c[3]) * idy2;
    for (int iy = 1; iy < n - 1; ++iy) out[iy] = (c[iy + 1] - 2.0 * c[iy] + c[iy - 1]) * idy2;
    out[n - 1] = (2.0 * c[n - 1] - 5.0 * c[n - 2] + 4.0 * c[n - 3] - c[n - 4]) * idy2;
  }
  return r;
}

// y-quadrature weights: trapezoid with Gregory end corrections of order 4
// (weights 3/8, 7/6, 23/24 at the three nodes next to each boundary).  Falls
// back to plain trapezoid on very short columns.
inline std::vector<double> y_quadrature_weights(int ny, double dy) {
  std::vector<double> w(static_cast<size_t>(ny), dy);
  if (ny >= 8) {
    const double e0 = 3.0 / 8.0, e1 = 7.0 / 6.0, e2 = 23.0 / 24.0;
    w[0] = e0 * dy;
    w[1] = e1 * dy;
    w[2] = e2 * dy;
    w[static_cast<size_t>(ny - 1)] = e0 * dy;
    w[static_cast<size_t>(ny - 2)] = e1 * dy;
    w[static_cast<size_t>(ny - 3)] = e2 * dy;
  } else {
    w[0] = 0.5 * dy;
    w[static_cast<size_t>(ny - 1)] = 0.5 * dy;
  }
  return w;
}

// integral over Omega of w * f^2, with w an optional pointwise weight field.
inline double weighted_l2_sq(const Field& f, const GridSpec& g, const Field* w = nullptr) {
  const auto wy = y_quadrature_weights(g.ny, g.dy());
  const double dx = g.dx();
  double total = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) {
    const double* c = f.column(ix);
    const double* wc = w ? w->column(ix) : nullptr;
    double col = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
      const double v = c[iy] * c[iy];
      col += wy[static_cast<size_t>(iy)] * (wc ? wc[iy] * v : v);
    }
    total += col;
  }
  return total * dx;
}

// Plain composite-trapezoid cumulative integral of a column: out[k] =
// integral from y0 to yk of c on a uniform grid with spacing dy.
inline void cumtrapz(const double* c, int n, double dy, double* out) {
  out[0] = 0.0;
  for (int i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * dy * (c[i - 1] + c[i]);
}

}  // namespace mhdbl
