#pragma once

#include <cmath>
#include <vector>

#include "mhdbl/errors.hpp"
#include "mhdbl/mat3.hpp"

namespace mhdbl {

// Thomas algorithm.  sub[0] and sup[n-1] are unused.  diag and rhs are
// overwritten; the solution lands in rhs.
inline void solve_tridiag(const std::vector<double>& sub, std::vector<double>& diag,
                          const std::vector<double>& sup, std::vector<double>& rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(diag[i - 1]) < 1e-300)
      throw step_failure("tridiagonal solve: zero pivot");
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(diag[n - 1]) < 1e-300) throw step_failure("tridiagonal solve: zero pivot");
  rhs[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// Block variant with 3x3 blocks, used by the coupled implicit diffusion
// solve of the non-isentropic system.  Same storage conventions.
inline void solve_block3_tridiag(const std::vector<Mat3>& sub, std::vector<Mat3>& diag,
                                 const std::vector<Mat3>& sup, std::vector<Vec3>& rhs) {
  const size_t n = diag.size();
  std::vector<Mat3> dinv(n);
  dinv[0] = diag[0].inverse(1e-14);
  for (size_t i = 1; i < n; ++i) {
    const Mat3 w = sub[i] * dinv[i - 1];
    diag[i] = diag[i] - w * sup[i - 1];
    rhs[i] = rhs[i] - w * rhs[i - 1];
    dinv[i] = diag[i].inverse(1e-14);
  }
  rhs[n - 1] = dinv[n - 1] * rhs[n - 1];
  for (size_t i = n - 1; i-- > 0;) {
    rhs[i] = dinv[i] * (rhs[i] - sup[i] * rhs[i + 1]);
  }
}

}  // namespace mhdbl
