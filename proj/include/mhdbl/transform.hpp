#pragma once

#include <vector>

#include "mhdbl/coefficients.hpp"
#include "mhdbl/fd.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/interp.hpp"

namespace mhdbl {

// Stream-function map between physical y and transformed ybar, per x-column.
// psi(x, y_j) = integral of h over [0, y_j]; strictly increasing when
// h >= 1/2 holds, which the constructor enforces.
struct TransformMap {
  GridSpec phys_grid;
  Field psi;          // psi sampled on the physical grid
  double h_min = 0.0;

  std::vector<double> psi_column(int ix) const {
    return {psi.column(ix), psi.column(ix) + phys_grid.ny};
  }

  // ybar -> y on one column (monotone cubic inverse of the psi table).
  CubicInterpolant y_of_psi(int ix) const {
    std::vector<double> ys(static_cast<size_t>(phys_grid.ny));
    for (int iy = 0; iy < phys_grid.ny; ++iy) ys[static_cast<size_t>(iy)] = phys_grid.y(iy);
    const auto ps = psi_column(ix);
    return CubicInterpolant(ps, ys);
  }
};

inline TransformMap stream_function(const Field& h_phys, const GridSpec& grid,
                                    double h_min_bound = 0.5) {
  TransformMap map;
  map.phys_grid = grid;
  map.psi = Field(grid);
  map.h_min = h_phys.min();
  if (!(map.h_min >= h_min_bound)) {
    throw degeneracy_error("stream function transform degenerate: min h = " +
                           std::to_string(map.h_min) + " < " + std::to_string(h_min_bound));
  }
  for (int ix = 0; ix < grid.nx; ++ix) {
    cumtrapz(h_phys.column(ix), grid.ny, grid.dy(), map.psi.column(ix));
  }
  return map;
}

struct TransformedFields {
  GridSpec grid;               // transformed (ybar) grid
  std::vector<Field> fields;
  long extrapolated_nodes = 0;  // targets beyond psi(Y_max), extended constantly
};

// Samples physical fields at the transformed coordinates: per column, the
// field is interpolated as a function of psi and evaluated on the ybar grid.
inline TransformedFields to_transformed(const std::vector<Field>& fields_phys,
                                        const TransformMap& map, const GridSpec& grid_trans) {
  TransformedFields out;
  out.grid = grid_trans;
  out.fields.reserve(fields_phys.size());
  for (const Field& f : fields_phys) {
    Field ft(grid_trans);
    for (int ix = 0; ix < grid_trans.nx; ++ix) {
      const auto ps = map.psi_column(ix);
      const std::span<const double> col(f.column(ix), static_cast<size_t>(map.phys_grid.ny));
      CubicInterpolant interp(ps, col);
      const double psi_top = ps.back();
      for (int iy = 0; iy < grid_trans.ny; ++iy) {
        const double yb = grid_trans.y(iy);
        if (yb > psi_top) ++out.extrapolated_nodes;
        ft(ix, iy) = interp(yb);
      }
    }
    out.fields.push_back(std::move(ft));
  }
  return out;
}

struct PhysicalFields {
  GridSpec grid;                 // uniform physical grid
  std::vector<Field> fields;
  std::vector<double> y_top;     // y(ybar_max) per column
};

// Inverse map: y(ybar) = integral of 1/h over [0, ybar] per column, then the
// fields are resampled on a uniform physical grid covering [0, min y_top].
inline PhysicalFields from_transformed(const std::vector<Field>& fields_trans,
                                       const Field& h_trans, const GridSpec& grid_trans,
                                       double h_min_bound = 0.5) {
  if (!(h_trans.min() >= h_min_bound)) {
    throw degeneracy_error("inverse transform degenerate: min h = " +
                           std::to_string(h_trans.min()));
  }
  const int nx = grid_trans.nx, ny = grid_trans.ny;
  std::vector<std::vector<double>> y_cols(static_cast<size_t>(nx));
  double y_top_min = 0.0;
  for (int ix = 0; ix < nx; ++ix) {
    std::vector<double> invh(static_cast<size_t>(ny));
    for (int iy = 0; iy < ny; ++iy) invh[static_cast<size_t>(iy)] = 1.0 / h_trans(ix, iy);
    auto& yc = y_cols[static_cast<size_t>(ix)];
    yc.resize(static_cast<size_t>(ny));
    cumtrapz(invh.data(), ny, grid_trans.dy(), yc.data());
    y_top_min = ix == 0 ? yc.back() : std::min(y_top_min, yc.back());
  }

  PhysicalFields out;
  out.grid = grid_trans;
  out.grid.y_max = y_top_min;
  out.y_top.resize(static_cast<size_t>(nx));
  for (int ix = 0; ix < nx; ++ix) out.y_top[static_cast<size_t>(ix)] = y_cols[static_cast<size_t>(ix)].back();

  for (const Field& f : fields_trans) {
    Field fp(out.grid);
    for (int ix = 0; ix < nx; ++ix) {
      const std::span<const double> col(f.column(ix), static_cast<size_t>(ny));
      CubicInterpolant interp(y_cols[static_cast<size_t>(ix)], col);
      for (int iy = 0; iy < out.grid.ny; ++iy) fp(ix, iy) = interp(out.grid.y(iy));
    }
    out.fields.push_back(std::move(fp));
  }
  return out;
}

// Reconstructs the normal velocity v and the normal magnetic component g on
// the physical grid from (u, h_tilde) via the divergence identities:
//   g = -int_0^y dx(h_tilde),   dy(v) = C (h (h dx(u) + g dy(u)) + h dyy(h_tilde)) - dx(u).
struct NormalComponents {
  Field v, g;
};

inline NormalComponents recover_vg(const Field& u, const Field& h_tilde, const GridSpec& grid,
                                   double gamma) {
  NormalComponents out{Field(grid), Field(grid)};
  const Field ux = ddx(u, grid);
  const Field uy = ddy(u, grid);
  const Field hx = ddx(h_tilde, grid);
  const Field hyy = d2y(h_tilde, grid);

  std::vector<double> integrand(static_cast<size_t>(grid.ny));
  for (int ix = 0; ix < grid.nx; ++ix) {
    for (int iy = 0; iy < grid.ny; ++iy) integrand[static_cast<size_t>(iy)] = -hx(ix, iy);
    cumtrapz(integrand.data(), grid.ny, grid.dy(), out.g.column(ix));
  }
  for (int ix = 0; ix < grid.nx; ++ix) {
    for (int iy = 0; iy < grid.ny; ++iy) {
      const double h = 1.0 + h_tilde(ix, iy);
      const double C = isentropic_coeffs(h, gamma).C;
      const double div_rhs =
          C * (h * (h * ux(ix, iy) + out.g(ix, iy) * uy(ix, iy)) + h * hyy(ix, iy));
      integrand[static_cast<size_t>(iy)] = div_rhs - ux(ix, iy);
    }
    cumtrapz(integrand.data(), grid.ny, grid.dy(), out.v.column(ix));
  }
  return out;
}

}  // namespace mhdbl
