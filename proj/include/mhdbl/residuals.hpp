#pragma once

#include "mhdbl/cutoff.hpp"
#include "mhdbl/outflow.hpp"

namespace mhdbl {

// Pointwise inputs for the residual terms of the non-isentropic system in
// perturbation form.  theta and q are the full values at the point; the
// perturbations are u_tilde and q_tilde = q - H^2/2.
struct ResidualInputs {
  double u_tilde = 0.0;
  double q_tilde = 0.0;
  double dy_q_tilde = 0.0;
  double theta = 1.0;  // full temperature
  double q = 0.5;      // full magnetic energy
  CutoffValues chi{};
  OutflowTraces tr{};
  double R = 1.0;
};

struct Residuals {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
};

namespace detail {
struct ResidualCommon {
  double a, Q, Qinf, pg, psum, q_b;
};
inline ResidualCommon residual_common(const ResidualInputs& in) {
  ResidualCommon c{};
  c.a = derive_a(in.R);
  c.q_b = 0.5 * in.tr.H * in.tr.H;
  c.Q = in.tr.P + (1.0 - 2.0 * c.a) * in.q;
  c.Qinf = in.tr.P + (1.0 - 2.0 * c.a) * c.q_b;
  c.pg = in.tr.P - in.q;
  c.psum = in.tr.P + in.q;
  return c;
}
}  // namespace detail

// Residuals assembled from the trace time derivatives directly (the form in
// which they arise before the Bernoulli relations are used).  Serves as the
// independent cross-check of the Bernoulli form below.
inline Residuals residuals_trace_form(const ResidualInputs& in) {
  const auto c = detail::residual_common(in);
  const auto& tr = in.tr;
  const double a = c.a, Q = c.Q, pg = c.pg;
  const double th = in.theta;
  const double dts = tr.Theta - tr.theta_star;

  Residuals r;
  r.r1 = -(in.R * th / pg) * tr.P_x + (in.R * th / pg) * tr.H * tr.H_x;

  r.r2 = -in.chi.chi * tr.Theta_t - (1.0 - in.chi.chi) * tr.theta_star_t -
         in.u_tilde * in.chi.chi * tr.Theta_x -
         in.u_tilde * (1.0 - in.chi.chi) * tr.theta_star_x -
         (1.0 - (a * th / Q) * c.psum / pg) * in.dy_q_tilde * in.chi.dchi * dts +
         (2.0 * a * th * in.q / Q) * (c.psum / pg) * in.chi.d2chi * dts +
         (a * th / Q) * (tr.P_t + tr.P_x * in.u_tilde);

  r.r3 = -tr.H * tr.H_t - in.u_tilde * tr.H * tr.H_x -
         (2.0 * a * in.q / Q) * in.dy_q_tilde * in.chi.dchi * dts -
         (4.0 * a * in.q * in.q / Q) * in.chi.d2chi * dts +
         (2.0 * in.q / (Q * (in.R + 1.0))) * (tr.P_t + tr.P_x * in.u_tilde);
  return r;
}

// Residuals after the Bernoulli relations eliminate Theta_t and H_t.  For a
// Bernoulli-consistent outflow this agrees with residuals_trace_form exactly;
// r1 vanishes identically.  The elimination in r2 is carried out exactly:
//   -chi Theta_t + (a theta / Q) chi P_t
//     = a chi P_t [ (theta - Theta) Qinf - (1-2a) Theta q_tilde ] / (Q Qinf).
inline Residuals residuals_bernoulli_form(const ResidualInputs& in) {
  const auto c = detail::residual_common(in);
  const auto& tr = in.tr;
  const double a = c.a, Q = c.Q, Qinf = c.Qinf, pg = c.pg;
  const double th = in.theta;
  const double dts = tr.Theta - tr.theta_star;

  Residuals r;
  r.r1 = 0.0;

  r.r2 = -(1.0 - in.chi.chi) * tr.theta_star_t - in.u_tilde * in.chi.chi * tr.Theta_x -
         in.u_tilde * (1.0 - in.chi.chi) * tr.theta_star_x -
         (1.0 - (a * th / Q) * c.psum / pg) * in.dy_q_tilde * in.chi.dchi * dts +
         (2.0 * a * th * in.q / Q) * (c.psum / pg) * in.chi.d2chi * dts +
         (a * th / Q) * ((1.0 - in.chi.chi) * tr.P_t + tr.P_x * in.u_tilde) +
         a * in.chi.chi * tr.P_t *
             ((th - tr.Theta) * Qinf - (1.0 - 2.0 * a) * tr.Theta * in.q_tilde) / (Q * Qinf);

  r.r3 = -in.u_tilde * tr.H * tr.H_x -
         (2.0 * a * in.q / Q) * in.dy_q_tilde * in.chi.dchi * dts -
         (4.0 * a * in.q * in.q / Q) * in.chi.d2chi * dts +
         2.0 * in.q_tilde * tr.P * tr.P_t / (Q * (in.R + 1.0) * Qinf) +
         (2.0 * in.q / (Q * (in.R + 1.0))) * tr.P_x * in.u_tilde;
  return r;
}

}  // namespace mhdbl
