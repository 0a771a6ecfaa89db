#pragma once

#include <cmath>
#include <string>

#include "mhdbl/errors.hpp"

namespace mhdbl {

inline constexpr double kSqrt3 = 1.7320508075688772935;

// Pressure under the uniform-outflow normalization (rho0, u0, h0) = (1, 0, 1):
// p + h^2/2 is constant in y and equals 3/2 on the boundary.
inline double pressure_from_h(double h) {
  const double p = 1.5 - 0.5 * h * h;
  if (!(p > 0.0)) {
    throw admissibility_error("pressure positivity violated: h^2 >= 3 (h = " +
                              std::to_string(h) + ")");
  }
  return p;
}

// Pointwise coefficients of the transformed isentropic system:
//   A = p^{-1/gamma} = 1/rho,   C = 1/(gamma p + h^2),   B = 1 - h^2 C.
// All positive on 1/2 <= h < sqrt(3), and B + h^2 C = 1 by construction.
struct CoefficientSet {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

inline CoefficientSet isentropic_coeffs(double h, double gamma) {
  if (!(gamma >= 1.0)) throw construction_error("gamma must satisfy gamma >= 1");
  if (!(h >= 0.5)) {
    throw admissibility_error("magnetic field below admissible bound h >= 1/2 (h = " +
                              std::to_string(h) + ")");
  }
  if (!(h < kSqrt3)) {
    throw admissibility_error("magnetic field outside admissible bound h < sqrt(3) (h = " +
                              std::to_string(h) + ")");
  }
  const double p = 1.5 - 0.5 * h * h;
  CoefficientSet c;
  c.C = 1.0 / (gamma * p + h * h);
  c.B = 1.0 - h * h * c.C;
  c.A = std::pow(p, -1.0 / gamma);
  return c;
}

}  // namespace mhdbl
