#pragma once

#include <cmath>

#include "mhdbl/coefficients.hpp"
#include "mhdbl/matrices.hpp"
#include "mhdbl/params.hpp"

namespace mhdbl {

// Value and the partial derivatives the governing operators need.
struct AnalyticPoint {
  double v = 0.0, t = 0.0, x = 0.0, y = 0.0, yy = 0.0;
};

// Additive forcing on the evolution-form right side of the system; out has
// one entry per component.
struct SourceTerm {
  virtual ~SourceTerm() = default;
  virtual void eval(double t, double x, double y, double* out) const = 0;
};

// Manufactured solution for the isentropic system:
//   u* = delta sin(x) y e^{-y} cos(w t),  h* = delta cos(x) e^{-y^2} sin(w t).
// Both satisfy the wall conditions (u = 0, dy h = 0) and decay in y.
struct ManufacturedIsentropic : SourceTerm {
  double delta = 0.05;
  double omega = 1.0;
  double gamma = 1.4;

  AnalyticPoint u(double t, double x, double y) const {
    AnalyticPoint p;
    const double sp = std::sin(x), cp = std::cos(x);
    const double e = std::exp(-y);
    const double ct = std::cos(omega * t);
    p.v = delta * sp * y * e * ct;
    p.t = -delta * omega * sp * y * e * std::sin(omega * t);
    p.x = delta * cp * y * e * ct;
    p.y = delta * sp * (1.0 - y) * e * ct;
    p.yy = delta * sp * (y - 2.0) * e * ct;
    return p;
  }

  AnalyticPoint h(double t, double x, double y) const {
    AnalyticPoint p;
    const double sp = std::sin(x), cp = std::cos(x);
    const double e = std::exp(-y * y);
    const double st = std::sin(omega * t);
    p.v = delta * cp * e * st;
    p.t = delta * omega * cp * e * std::cos(omega * t);
    p.x = -delta * sp * e * st;
    p.y = -2.0 * y * delta * cp * e * st;
    p.yy = (4.0 * y * y - 2.0) * delta * cp * e * st;
    return p;
  }

  // Forcing that makes (u*, h*) an exact solution of the evolution form:
  //   du/dt = -u du/dx + A h dh/dx - (1-A) h dh/dy du/dy + A h^2 d2u/dy2 + s_u
  //   dh/dt = -u dh/dx + B h du/dx - (1-B) h (dh/dy)^2 + B h^2 d2h/dy2 + s_h
  void eval(double t, double x, double y, double* out) const override {
    const AnalyticPoint pu = u(t, x, y);
    const AnalyticPoint ph = h(t, x, y);
    const double hfull = 1.0 + ph.v;
    const CoefficientSet c = isentropic_coeffs(hfull, gamma);
    out[0] = pu.t + pu.v * pu.x - c.A * hfull * ph.x + (1.0 - c.A) * hfull * ph.y * pu.y -
             c.A * hfull * hfull * pu.yy;
    out[1] = ph.t + pu.v * ph.x - c.B * hfull * pu.x + (1.0 - c.B) * hfull * ph.y * ph.y -
             c.B * hfull * hfull * ph.yy;
  }
};

// Manufactured solution for the non-isentropic system around a uniform
// steady outflow (Theta = theta*, H, P constants):
//   u*  = delta sin(x)   y e^{-y}  cos(w t)
//   th* = delta cos(x)   y e^{-y}  sin(w t + 1)
//   q*  = delta cos(x+1) e^{-y^2}  cos(w t + 2)
struct ManufacturedNonIsentropic : SourceTerm {
  double delta = 0.05;
  double omega = 1.0;
  double Theta = 1.0, H = 1.0, P = 1.5, R = 2.0;

  AnalyticPoint u(double t, double x, double y) const {
    AnalyticPoint p;
    const double sp = std::sin(x), cp = std::cos(x);
    const double e = std::exp(-y);
    const double ct = std::cos(omega * t);
    p.v = delta * sp * y * e * ct;
    p.t = -delta * omega * sp * y * e * std::sin(omega * t);
    p.x = delta * cp * y * e * ct;
    p.y = delta * sp * (1.0 - y) * e * ct;
    p.yy = delta * sp * (y - 2.0) * e * ct;
    return p;
  }

  AnalyticPoint th(double t, double x, double y) const {
    AnalyticPoint p;
    const double sp = std::sin(x), cp = std::cos(x);
    const double e = std::exp(-y);
    const double st = std::sin(omega * t + 1.0);
    p.v = delta * cp * y * e * st;
    p.t = delta * omega * cp * y * e * std::cos(omega * t + 1.0);
    p.x = -delta * sp * y * e * st;
    p.y = delta * cp * (1.0 - y) * e * st;
    p.yy = delta * cp * (y - 2.0) * e * st;
    return p;
  }

  AnalyticPoint q(double t, double x, double y) const {
    AnalyticPoint p;
    const double sp = std::sin(x + 1.0), cp = std::cos(x + 1.0);
    const double e = std::exp(-y * y);
    const double ct = std::cos(omega * t + 2.0);
    p.v = delta * cp * e * ct;
    p.t = -delta * omega * cp * e * std::sin(omega * t + 2.0);
    p.x = -delta * sp * e * ct;
    p.y = -2.0 * y * delta * cp * e * ct;
    p.yy = (4.0 * y * y - 2.0) * delta * cp * e * ct;
    return p;
  }

  void eval(double t, double x, double y, double* out) const override {
    const AnalyticPoint pu = u(t, x, y);
    const AnalyticPoint pt = th(t, x, y);
    const AnalyticPoint pq = q(t, x, y);
    const double a = derive_a(R);
    const double thf = Theta + pt.v;          // uniform background: chi-blend is Theta
    const double qf = 0.5 * H * H + pq.v;
    const double pg = P - qf;
    const double ps = P + qf;
    const double Q = P + (1.0 - 2.0 * a) * qf;

    // evolution form; r_i = 0 for the uniform steady outflow
    out[0] = pu.t + pu.v * pu.x - (R * thf / pg) * pq.x + (1.0 - R * thf / pg) * pq.y * pu.y -
             (2.0 * R * thf * qf / pg) * pu.yy;
    out[1] = pt.t + pu.v * pt.x + (2.0 * a * thf * qf / Q) * pu.x -
             (2.0 * a * thf * qf / Q) * (ps / pg) * pu.y * pu.y +
             (1.0 - (a * thf / Q) * ps / pg) * pq.y * pt.y -
             (a * thf / Q) * (ps / pg) * pq.y * pq.y -
             (2.0 * a * thf * qf / Q) * ((ps / pg) * pt.yy - pq.yy);
    out[2] = pq.t + pu.v * pq.x - (2.0 * pg * qf / Q) * pu.x +
             (4.0 * a * qf * qf / Q) * pu.y * pu.y + (2.0 * a * qf / Q) * pq.y * pt.y +
             (ps / Q) * pq.y * pq.y -
             (2.0 * pg * qf / Q) * (pq.yy - (2.0 * a * qf / pg) * pt.yy);
  }
};

}  // namespace mhdbl
