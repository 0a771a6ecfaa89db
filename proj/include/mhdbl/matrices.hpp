#pragma once

#include <string>

#include "mhdbl/mat3.hpp"
#include "mhdbl/params.hpp"

namespace mhdbl {

// Pointwise state of the non-isentropic system in transformed variables.
// theta and q are the full (not perturbation) values at the point.
struct NonIsentropicPoint {
  double u = 0.0;      // tangential velocity
  double theta = 1.0;  // temperature
  double q = 0.5;      // magnetic energy, q = h^2/2
};

// Quasilinear matrices of the symmetrized non-isentropic system at one point.
//
//   S        symmetrizer, symmetric positive definite on the admissible set
//   A0, B0   advection / diffusion matrices of the unsymmetrized form
//   A_sym    S*A0 (symmetric)
//   B_diag   S*B0 = diag(2 theta^2 q, 2 theta q, theta^2)
//   G1..G3   energy weights; the structural diagonal of S
struct MatrixSet {
  Mat3 S, A0, B0, A_sym, B_diag, S_inv;
  double G1 = 0.0, G2 = 0.0, G3 = 0.0;
  double Q = 0.0;  // P + (1-2a) q
};

inline void check_admissible(const NonIsentropicPoint& pt, double P,
                             const AdmissibilityMargins& margins) {
  if (!(pt.theta >= margins.theta_min))
    throw admissibility_error("theta below margin: theta = " + std::to_string(pt.theta));
  if (!(pt.q >= margins.q_min))
    throw admissibility_error("q below margin: q = " + std::to_string(pt.q));
  if (!(P - pt.q >= margins.p_gap_min))
    throw admissibility_error("P - q below margin: P - q = " + std::to_string(P - pt.q));
}

// Assembles the matrix set at one point.  P is the total-pressure trace at
// the same (t, x).  Throws admissibility_error naming the failing inequality.
inline MatrixSet build_matrices(const NonIsentropicPoint& pt, double P,
                                const ModelParams& params) {
  check_admissible(pt, P, params.margins);
  const double a = params.a();
  const double R = params.R;
  const double th = pt.theta;
  const double q = pt.q;
  const double u = pt.u;
  const double pg = P - q;  // P - q > 0
  const double Q = P + (1.0 - 2.0 * a) * q;
  if (!(Q > 0.0)) throw admissibility_error("Q = P + (1-2a) q not positive");

  MatrixSet ms;
  ms.Q = Q;
  ms.G1 = th * pg / R;
  ms.G2 = pg / a;
  ms.G3 = 0.5 * th * th / q * (P + q) / pg;

  ms.S = Mat3::zero();
  ms.S(0, 0) = ms.G1;
  ms.S(1, 1) = ms.G2;
  ms.S(2, 2) = ms.G3;
  ms.S(1, 2) = th;
  ms.S(2, 1) = th;

  ms.A0 = Mat3::zero();
  ms.A0(0, 0) = u;
  ms.A0(1, 1) = u;
  ms.A0(2, 2) = u;
  ms.A0(0, 2) = -R * th / pg;
  ms.A0(1, 0) = 2.0 * a * th * q / Q;
  ms.A0(2, 0) = -2.0 * pg * q / Q;

  ms.B0 = Mat3::zero();
  ms.B0(0, 0) = 2.0 * q * R * th / pg;
  ms.B0(1, 1) = 2.0 * q * a * th * (P + q) / (Q * pg);
  ms.B0(1, 2) = -2.0 * q * a * th / Q;
  ms.B0(2, 1) = -4.0 * a * q * q / Q;
  ms.B0(2, 2) = 2.0 * q * pg / Q;

  ms.A_sym = ms.S * ms.A0;
  ms.B_diag = ms.S * ms.B0;
  ms.S_inv = ms.S.inverse();
  return ms;
}

}  // namespace mhdbl
