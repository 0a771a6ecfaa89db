#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mhdbl/coefficients.hpp"
#include "mhdbl/cutoff.hpp"
#include "mhdbl/fd.hpp"
#include "mhdbl/manufactured.hpp"
#include "mhdbl/outflow.hpp"
#include "mhdbl/params.hpp"
#include "mhdbl/residuals.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

// ---------------------------------------------------------------------------
// Pointwise coefficient fields, evaluated once per step at t^n.

struct IsentropicWork {
  Field h, A, B;
  double min_h = std::numeric_limits<double>::infinity();
  double max_h = -std::numeric_limits<double>::infinity();
  bool admissible = true;
  std::string violation;
};

inline IsentropicWork isentropic_work(const State& s, const ModelParams& p) {
  IsentropicWork w;
  const GridSpec& g = s.grid;
  w.h = Field(g);
  w.A = Field(g);
  w.B = Field(g);
  const Field& ht = s.fields[1];
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      const double h = 1.0 + ht(ix, iy);
      w.h(ix, iy) = h;
      w.min_h = std::min(w.min_h, h);
      w.max_h = std::max(w.max_h, h);
      const double pr = 1.5 - 0.5 * h * h;
      if (!(h >= p.margins.h_min) || !(pr > 0.0)) {
        w.admissible = false;
        continue;
      }
      const double C = 1.0 / (p.gamma * pr + h * h);
      w.B(ix, iy) = 1.0 - h * h * C;
      w.A(ix, iy) = std::pow(pr, -1.0 / p.gamma);
    }
  }
  if (!w.admissible) {
    w.violation = w.min_h < p.margins.h_min
                      ? "h below margin (min h = " + std::to_string(w.min_h) + ")"
                      : "pressure positivity violated (max h = " + std::to_string(w.max_h) + ")";
  }
  return w;
}

struct NonIsoWork {
  Field theta, q, Qf;                 // full temperature, magnetic energy, Q
  std::vector<OutflowTraces> traces;  // per x node, at the work's time
  std::vector<CutoffValues> chi;      // per y node
  double a = 0.5;
  double min_theta = std::numeric_limits<double>::infinity();
  double min_q = std::numeric_limits<double>::infinity();
  double min_pgap = std::numeric_limits<double>::infinity();
  bool admissible = true;
  std::string violation;
};

inline NonIsoWork noniso_work(const State& s, const ModelParams& p, const OutflowSpec& outflow,
                              double t) {
  NonIsoWork w;
  const GridSpec& g = s.grid;
  w.a = p.a();
  w.theta = Field(g);
  w.q = Field(g);
  w.Qf = Field(g);
  w.traces.resize(static_cast<size_t>(g.nx));
  w.chi.resize(static_cast<size_t>(g.ny));
  for (int iy = 0; iy < g.ny; ++iy) w.chi[static_cast<size_t>(iy)] = cutoff(g.y(iy));
  const Field& tht = s.fields[1];
  const Field& qt = s.fields[2];
  for (int ix = 0; ix < g.nx; ++ix) {
    const OutflowTraces tr = outflow.eval(t, g.x(ix));
    w.traces[static_cast<size_t>(ix)] = tr;
    const double q_b = 0.5 * tr.H * tr.H;
    for (int iy = 0; iy < g.ny; ++iy) {
      const CutoffValues& cv = w.chi[static_cast<size_t>(iy)];
      const double th = tht(ix, iy) + cv.chi * tr.Theta + (1.0 - cv.chi) * tr.theta_star;
      const double q = qt(ix, iy) + q_b;
      w.theta(ix, iy) = th;
      w.q(ix, iy) = q;
      w.Qf(ix, iy) = tr.P + (1.0 - 2.0 * w.a) * q;
      w.min_theta = std::min(w.min_theta, th);
      w.min_q = std::min(w.min_q, q);
      w.min_pgap = std::min(w.min_pgap, tr.P - q);
    }
  }
  if (w.min_theta < p.margins.theta_min) {
    w.admissible = false;
    w.violation = "theta below margin (min theta = " + std::to_string(w.min_theta) + ")";
  } else if (w.min_q < p.margins.q_min) {
    w.admissible = false;
    w.violation = "q below margin (min q = " + std::to_string(w.min_q) + ")";
  } else if (w.min_pgap < p.margins.p_gap_min) {
    w.admissible = false;
    w.violation = "P - q below margin (min P - q = " + std::to_string(w.min_pgap) + ")";
  }
  return w;
}

// ---------------------------------------------------------------------------
// Evolution-form tendencies.  with_diffusion adds the second-order terms;
// the stepper leaves them out (they are treated implicitly) while the energy
// module wants the full time derivative.

inline std::vector<Field> isentropic_tendency(const State& s, const IsentropicWork& w,
                                              const SourceTerm* src, bool with_diffusion) {
  const GridSpec& g = s.grid;
  const Field& u = s.fields[0];
  const Field& ht = s.fields[1];
  const Field ux = ddx(u, g), uy = ddy(u, g);
  const Field hx = ddx(ht, g), hy = ddy(ht, g);
  Field fu(g), fh(g);
  double sbuf[2] = {0.0, 0.0};
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      const double A = w.A(ix, iy), B = w.B(ix, iy), h = w.h(ix, iy);
      double du = -u(ix, iy) * ux(ix, iy) + A * h * hx(ix, iy) -
                  (1.0 - A) * h * hy(ix, iy) * uy(ix, iy);
      double dh = -u(ix, iy) * hx(ix, iy) + B * h * ux(ix, iy) -
                  (1.0 - B) * h * hy(ix, iy) * hy(ix, iy);
      if (src) {
        src->eval(s.time, g.x(ix), g.y(iy), sbuf);
        du += sbuf[0];
        dh += sbuf[1];
      }
      fu(ix, iy) = du;
      fh(ix, iy) = dh;
    }
  }
  if (with_diffusion) {
    const Field uyy = d2y(u, g), hyy = d2y(ht, g);
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy) {
        const double h2 = w.h(ix, iy) * w.h(ix, iy);
        fu(ix, iy) += w.A(ix, iy) * h2 * uyy(ix, iy);
        fh(ix, iy) += w.B(ix, iy) * h2 * hyy(ix, iy);
      }
  }
  std::vector<Field> out;
  out.push_back(std::move(fu));
  out.push_back(std::move(fh));
  return out;
}

inline std::vector<Field> noniso_tendency(const State& s, const NonIsoWork& w,
                                          const ModelParams& p, const SourceTerm* src,
                                          bool with_diffusion) {
  const GridSpec& g = s.grid;
  const Field& u = s.fields[0];
  const Field& tht = s.fields[1];
  const Field& qt = s.fields[2];
  const Field ux = ddx(u, g), uy = ddy(u, g);
  const Field thx = ddx(tht, g), thy = ddy(tht, g);
  const Field qx = ddx(qt, g), qy = ddy(qt, g);
  Field fu(g), fth(g), fq(g);
  const double a = w.a;
  const double R = p.R;
  double sbuf[3] = {0.0, 0.0, 0.0};
  ResidualInputs ri;
  ri.R = R;
  for (int ix = 0; ix < g.nx; ++ix) {
    const OutflowTraces& tr = w.traces[static_cast<size_t>(ix)];
    ri.tr = tr;
    const double q_b = 0.5 * tr.H * tr.H;
    for (int iy = 0; iy < g.ny; ++iy) {
      const double th = w.theta(ix, iy), q = w.q(ix, iy), Q = w.Qf(ix, iy);
      const double pg = tr.P - q, ps = tr.P + q;
      const double uyv = uy(ix, iy), thyv = thy(ix, iy), qyv = qy(ix, iy);

      ri.u_tilde = u(ix, iy);
      ri.q_tilde = q - q_b;
      ri.dy_q_tilde = qyv;
      ri.theta = th;
      ri.q = q;
      ri.chi = w.chi[static_cast<size_t>(iy)];
      const Residuals res = residuals_bernoulli_form(ri);

      double du = -u(ix, iy) * ux(ix, iy) + (R * th / pg) * qx(ix, iy) -
                  (1.0 - R * th / pg) * qyv * uyv + res.r1;
      double dth = -u(ix, iy) * thx(ix, iy) - (2.0 * a * th * q / Q) * ux(ix, iy) +
                   (2.0 * a * th * q / Q) * (ps / pg) * uyv * uyv -
                   (1.0 - (a * th / Q) * ps / pg) * qyv * thyv +
                   (a * th / Q) * (ps / pg) * qyv * qyv + res.r2;
      double dq = -u(ix, iy) * qx(ix, iy) + (2.0 * pg * q / Q) * ux(ix, iy) -
                  (4.0 * a * q * q / Q) * uyv * uyv - (2.0 * a * q / Q) * qyv * thyv -
                  (ps / Q) * qyv * qyv + res.r3;
      if (src) {
        src->eval(s.time, g.x(ix), g.y(iy), sbuf);
        du += sbuf[0];
        dth += sbuf[1];
        dq += sbuf[2];
      }
      fu(ix, iy) = du;
      fth(ix, iy) = dth;
      fq(ix, iy) = dq;
    }
  }
  if (with_diffusion) {
    const Field uyy = d2y(u, g), thyy = d2y(tht, g), qyy = d2y(qt, g);
    for (int ix = 0; ix < g.nx; ++ix) {
      const OutflowTraces& tr = w.traces[static_cast<size_t>(ix)];
      for (int iy = 0; iy < g.ny; ++iy) {
        const double th = w.theta(ix, iy), q = w.q(ix, iy), Q = w.Qf(ix, iy);
        const double pg = tr.P - q, ps = tr.P + q;
        fu(ix, iy) += (2.0 * R * th * q / pg) * uyy(ix, iy);
        fth(ix, iy) += (2.0 * a * th * q / Q) * ((ps / pg) * thyy(ix, iy) - qyy(ix, iy));
        fq(ix, iy) += (2.0 * pg * q / Q) * (qyy(ix, iy) - (2.0 * a * q / pg) * thyy(ix, iy));
      }
    }
  }
  std::vector<Field> out;
  out.push_back(std::move(fu));
  out.push_back(std::move(fth));
  out.push_back(std::move(fq));
  return out;
}

// Full PDE time derivative of the unknowns at the state's current time;
// feeds the first-order time-derivative terms of the energy norms.
inline std::vector<Field> pde_time_derivative(const State& s, const ModelParams& p,
                                              const OutflowSpec* outflow,
                                              const SourceTerm* src = nullptr) {
  if (s.regime == Regime::Isentropic) {
    const IsentropicWork w = isentropic_work(s, p);
    if (!w.admissible) throw admissibility_error(w.violation);
    return isentropic_tendency(s, w, src, true);
  }
  if (!outflow) throw construction_error("non-isentropic time derivative needs an outflow");
  const NonIsoWork w = noniso_work(s, p, *outflow, s.time);
  if (!w.admissible) throw admissibility_error(w.violation);
  return noniso_tendency(s, w, p, src, true);
}

// The non-diffusive symmetrized-form tendencies: the isentropic equations
// carry their (B, A) weights, the non-isentropic ones are the
// S^{-1}-premultiplied (evolution) form.
inline std::vector<Field> rhs_explicit(const State& s, const ModelParams& p,
                                       const OutflowSpec* outflow = nullptr,
                                       const SourceTerm* src = nullptr) {
  if (s.regime == Regime::Isentropic) {
    const IsentropicWork w = isentropic_work(s, p);
    if (!w.admissible) throw admissibility_error(w.violation);
    std::vector<Field> t = isentropic_tendency(s, w, src, false);
    for (int ix = 0; ix < s.grid.nx; ++ix)
      for (int iy = 0; iy < s.grid.ny; ++iy) {
        t[0](ix, iy) *= w.B(ix, iy);
        t[1](ix, iy) *= w.A(ix, iy);
      }
    return t;
  }
  if (!outflow) throw construction_error("non-isentropic tendency needs an outflow");
  const NonIsoWork w = noniso_work(s, p, *outflow, s.time);
  if (!w.admissible) throw admissibility_error(w.violation);
  return noniso_tendency(s, w, p, src, false);
}

// Discrete residual of the wall identity dyy(u) = -(1/h) dx(h_tilde) at
// y = 0, one-sided second derivative, max over x.  Isentropic trajectories.
inline double boundary_identity_residual(const State& s) {
  const GridSpec& g = s.grid;
  const Field& u = s.fields[0];
  const Field& ht = s.fields[1];
  const double idy2 = 1.0 / (g.dy() * g.dy());
  double worst = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) {
    const int ip = (ix + 1) % g.nx, im = (ix + g.nx - 1) % g.nx;
    const double uyy =
        (2.0 * u(ix, 0) - 5.0 * u(ix, 1) + 4.0 * u(ix, 2) - u(ix, 3)) * idy2;
    const double hx = (ht(ip, 0) - ht(im, 0)) / (2.0 * g.dx());
    const double h = 1.0 + ht(ix, 0);
    worst = std::max(worst, std::abs(uyy + hx / h));
  }
  return worst;
}

}  // namespace mhdbl
