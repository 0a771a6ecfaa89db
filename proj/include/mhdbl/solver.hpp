#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mhdbl/energy.hpp"
#include "mhdbl/physics.hpp"
#include "mhdbl/state.hpp"
#include "mhdbl/tridiag.hpp"

namespace mhdbl {

// ---------------------------------------------------------------------------
// Boundary conditions.
//   isentropic:      u = 0 and one-sided dy(h_tilde) = 0 at the wall
//   non-isentropic:  u = 0, theta_tilde = 0, one-sided dy(q_tilde) = 0
// All perturbations vanish on the far-field (truncation) row.

inline void apply_bcs(State& s) {
  const int ny = s.grid.ny;
  for (int ix = 0; ix < s.grid.nx; ++ix) {
    for (int c = 0; c < s.components(); ++c) s.fields[static_cast<size_t>(c)](ix, ny - 1) = 0.0;
    s.fields[0](ix, 0) = 0.0;
    if (s.regime == Regime::Isentropic) {
      Field& ht = s.fields[1];
      ht(ix, 0) = (4.0 * ht(ix, 1) - ht(ix, 2)) / 3.0;
    } else {
      s.fields[1](ix, 0) = 0.0;
      Field& qt = s.fields[2];
      qt(ix, 0) = (4.0 * qt(ix, 1) - qt(ix, 2)) / 3.0;
    }
  }
}

// ---------------------------------------------------------------------------
// Initial profiles.

enum class ProfileKind { SineExp, GaussianBump, FromFile };

struct ProfileSpec {
  ProfileKind kind = ProfileKind::SineExp;
  double center = 6.0;  // GaussianBump
  double width = 1.0;
  std::vector<Field> raw_fields;  // FromFile: preloaded by the caller
};

namespace detail {

inline std::vector<Field> profile_shape(const ProfileSpec& spec, Regime regime,
                                        const GridSpec& g) {
  const int nc = n_components(regime);
  if (spec.kind == ProfileKind::FromFile) {
    if (static_cast<int>(spec.raw_fields.size()) != nc)
      throw construction_error("profile file does not match the regime's component count");
    for (const Field& f : spec.raw_fields)
      if (f.nx != g.nx || f.ny != g.ny)
        throw construction_error("profile file grid does not match the run grid");
    return spec.raw_fields;
  }
  std::vector<Field> out(static_cast<size_t>(nc), Field(g));
  for (int ix = 0; ix < g.nx; ++ix) {
    const double sx = std::sin(g.x(ix)), cx = std::cos(g.x(ix));
    for (int iy = 0; iy < g.ny; ++iy) {
      const double y = g.y(iy);
      if (spec.kind == ProfileKind::SineExp) {
        const double wall = y * std::exp(-y);       // vanishes at the wall
        const double flat = std::exp(-y * y);       // dy = 0 at the wall
        out[0](ix, iy) = sx * wall;
        if (nc == 2) {
          out[1](ix, iy) = cx * flat;
        } else {
          out[1](ix, iy) = cx * wall;
          out[2](ix, iy) = cx * flat;
        }
      } else {  // GaussianBump
        const double r = (y - spec.center) / spec.width;
        const double bump = std::exp(-r * r);
        out[0](ix, iy) = sx * bump;
        for (int c = 1; c < nc; ++c) out[static_cast<size_t>(c)](ix, iy) = cx * bump;
      }
    }
  }
  return out;
}

inline void check_profile_compatibility(const std::vector<Field>& shape, Regime regime,
                                        const GridSpec& g) {
  const double scale = std::max({shape[0].max_abs(), shape[1].max_abs(), 1e-300});
  auto wall_max = [&](const Field& f) {
    double m = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) m = std::max(m, std::abs(f(ix, 0)));
    return m;
  };
  auto top_max = [&](const Field& f) {
    double m = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) m = std::max(m, std::abs(f(ix, g.ny - 1)));
    return m;
  };
  if (wall_max(shape[0]) > 1e-10 * scale)
    throw construction_error("profile incompatible with u|_{y=0} = 0");
  if (regime == Regime::NonIsentropic && wall_max(shape[1]) > 1e-10 * scale)
    throw construction_error("profile incompatible with theta|_{y=0} = 0");
  // Neumann component: one-sided derivative at the wall must vanish
  const Field& neu = shape[static_cast<size_t>(n_components(regime) - 1)];
  double neu_max = 0.0;
  for (int ix = 0; ix < g.nx; ++ix)
    neu_max = std::max(neu_max,
                       std::abs(-3.0 * neu(ix, 0) + 4.0 * neu(ix, 1) - neu(ix, 2)) /
                           (2.0 * g.dy()));
  if (neu_max > 1e-6 * scale / g.dy())
    throw construction_error("profile incompatible with the wall Neumann condition");
  for (const Field& f : shape)
    if (top_max(f) > 1e-6 * scale)
      throw construction_error("profile does not decay at y_max");
}

}  // namespace detail

// Builds a state whose discrete weighted energy is E(0) = 2 eps^2 (1 - 1e-6)
// exactly; the shape is fixed and only the amplitude is adjusted, by a
// fixed-point iteration on the (slightly nonlinear) energy functional.
inline State init_state(double epsilon, const ProfileSpec& profile, const GridSpec& grid,
                        const ModelParams& params, const OutflowSpec* outflow = nullptr) {
  grid.validate();
  if (!(epsilon >= 0.0)) throw construction_error("epsilon must be non-negative");
  State s = State::zeros(params.regime, grid);
  if (epsilon == 0.0) {
    s.push_history();
    return s;
  }
  auto shape = detail::profile_shape(profile, params.regime, grid);
  detail::check_profile_compatibility(shape, params.regime, grid);

  const double target = 2.0 * epsilon * epsilon * (1.0 - 1e-6);
  double c = epsilon;  // initial guess near the right scale
  double E = 0.0;
  for (int it = 0; it < 60; ++it) {
    for (int k = 0; k < s.components(); ++k)
      for (size_t i = 0; i < s.fields[static_cast<size_t>(k)].data.size(); ++i)
        s.fields[static_cast<size_t>(k)].data[i] = c * shape[static_cast<size_t>(k)].data[i];
    apply_bcs(s);
    s.history.clear();
    s.push_history();
    E = compute_energy(s, params, outflow).E;
    if (!(E > 0.0)) throw construction_error("profile has zero energy");
    if (std::abs(E - target) <= 1e-12 * target) break;
    c *= std::sqrt(target / E);
  }
  if (std::abs(E - target) > 1e-10 * target)
    throw construction_error("initial energy rescale did not converge");
  return s;
}

// ---------------------------------------------------------------------------
// IMEX stepper: explicit Euler on the advective/nonlinear terms, implicit
// Euler on the normal diffusion with coefficients frozen at t^n.  Isentropic
// diffusion solves are scalar tridiagonal per column; the non-isentropic
// (theta, q) coupling makes them block tridiagonal.

struct StepOutcome {
  bool accepted = false;
  std::string reason;       // rejection detail
  double dt = 0.0;
  int halvings = 0;
  double min_h_or_q = 0.0;  // min h (isentropic) or min q
};

struct SolverOptions {
  double cfl = 0.4;
  int max_halvings = 10;
  double dt_max = std::numeric_limits<double>::infinity();
  double diffusivity_floor = 1e-10;
};

class Solver {
 public:
  Solver(ModelParams params, SolverOptions opts = {}, const OutflowSpec* outflow = nullptr,
         const SourceTerm* source = nullptr)
      : params_(params), opts_(opts), outflow_(outflow), source_(source) {
    params_.validate();
    if (params_.regime == Regime::NonIsentropic && !outflow_)
      throw construction_error("non-isentropic solver needs an outflow");
  }

  // Advisory step size from the advective CFL condition plus the dy cap.
  double suggest_dt(const State& s) const {
    const GridSpec& g = s.grid;
    double sx = 0.0, sy = 0.0;
    if (s.regime == Regime::Isentropic) {
      const IsentropicWork w = isentropic_work(s, params_);
      if (!w.admissible) throw admissibility_error(w.violation);
      const Field hy = ddy(s.fields[1], g);
      for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
          const double A = w.A(ix, iy), B = w.B(ix, iy), h = w.h(ix, iy);
          sx = std::max(sx, std::abs(s.fields[0](ix, iy)) + h * std::sqrt(A * B));
          const double gy = std::abs(hy(ix, iy)) * h;
          sy = std::max(sy, std::max(std::abs(1.0 - A), std::abs(1.0 - B)) * gy);
        }
    } else {
      const NonIsoWork w = noniso_work(s, params_, *outflow_, s.time);
      if (!w.admissible) throw admissibility_error(w.violation);
      const Field uy = ddy(s.fields[0], g), thy = ddy(s.fields[1], g), qy = ddy(s.fields[2], g);
      const double a = w.a;
      for (int ix = 0; ix < g.nx; ++ix) {
        const double P = w.traces[static_cast<size_t>(ix)].P;
        for (int iy = 0; iy < g.ny; ++iy) {
          const double th = w.theta(ix, iy), q = w.q(ix, iy), Q = w.Qf(ix, iy);
          const double pg = P - q, ps = P + q;
          sx = std::max(sx,
                        std::abs(s.fields[0](ix, iy)) + std::sqrt(2.0 * params_.R * th * q / Q));
          const double gmax =
              std::max({std::abs(uy(ix, iy)), std::abs(thy(ix, iy)), std::abs(qy(ix, iy))});
          const double coef = 1.0 + params_.R * th / pg + (a * th / Q) * ps / pg +
                              2.0 * a * th * q * ps / (Q * pg) + 4.0 * a * q * q / Q +
                              2.0 * a * q / Q + ps / Q;
          sy = std::max(sy, coef * gmax);
        }
      }
    }
    double dt = g.dy();  // accuracy cap
    if (sx > 0.0) dt = std::min(dt, opts_.cfl * g.dx() / sx);
    if (sy > 0.0) dt = std::min(dt, opts_.cfl * g.dy() / sy);
    return std::min(dt, opts_.dt_max);
  }

  // One accepted step; retries with halved dt on admissibility or solver
  // trouble, up to max_halvings, then reports failure.
  StepOutcome step(State& s, double dt) const {
    StepOutcome out;
    const std::vector<Field> saved = s.fields;
    const double saved_t = s.time;
    for (int k = 0; k <= opts_.max_halvings; ++k) {
      out.dt = dt;
      out.halvings = k;
      if (attempt(s, dt, out)) {
        out.accepted = true;
        s.time = saved_t + dt;
        s.push_history();
        return out;
      }
      s.fields = saved;
      s.time = saved_t;
      dt *= 0.5;
    }
    out.accepted = false;
    return out;
  }

  const ModelParams& params() const { return params_; }
  const OutflowSpec* outflow() const { return outflow_; }
  const SourceTerm* source() const { return source_; }

 private:
  static bool finite(const std::vector<Field>& fs) {
    for (const Field& f : fs)
      for (double v : f.data)
        if (!std::isfinite(v)) return false;
    return true;
  }

  bool attempt(State& s, double dt, StepOutcome& out) const {
    if (s.regime == Regime::Isentropic) return attempt_isentropic(s, dt, out);
    return attempt_noniso(s, dt, out);
  }

  bool attempt_isentropic(State& s, double dt, StepOutcome& out) const {
    const GridSpec& g = s.grid;
    const IsentropicWork w = isentropic_work(s, params_);
    out.min_h_or_q = w.min_h;
    if (!w.admissible) {
      out.reason = w.violation;
      return false;
    }
    const auto tend = isentropic_tendency(s, w, source_, false);
    for (int c = 0; c < 2; ++c)
      for (size_t i = 0; i < s.fields[static_cast<size_t>(c)].data.size(); ++i)
        s.fields[static_cast<size_t>(c)].data[i] += dt * tend[static_cast<size_t>(c)].data[i];

    // implicit diffusion per column: u with Dirichlet/Dirichlet, h_tilde with
    // the one-sided Neumann closure folded into its first interior row
    const int n = g.ny - 2;  // interior rows
    std::vector<double> sub(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
        sup(static_cast<size_t>(n)), rhs(static_cast<size_t>(n));
    const double mu = dt / (g.dy() * g.dy());
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int c = 0; c < 2; ++c) {
        Field& f = s.fields[static_cast<size_t>(c)];
        const bool neumann = c == 1;
        for (int i = 0; i < n; ++i) {
          const int iy = i + 1;
          const double nu = (c == 0 ? w.A(ix, iy) : w.B(ix, iy)) * w.h(ix, iy) * w.h(ix, iy);
          if (nu < opts_.diffusivity_floor) {
            out.reason = "degenerate diffusivity at a node";
            return false;
          }
          const double lam = mu * nu;
          sub[static_cast<size_t>(i)] = -lam;
          diag[static_cast<size_t>(i)] = 1.0 + 2.0 * lam;
          sup[static_cast<size_t>(i)] = -lam;
          rhs[static_cast<size_t>(i)] = f(ix, iy);
        }
        if (neumann) {
          // wall row eliminated via f0 = (4 f1 - f2)/3
          const double lam = -sub[0];
          diag[0] -= lam * 4.0 / 3.0;
          sup[0] += lam / 3.0;
        }
        try {
          solve_tridiag(sub, diag, sup, rhs);
        } catch (const step_failure& e) {
          out.reason = e.what();
          return false;
        }
        for (int i = 0; i < n; ++i) f(ix, i + 1) = rhs[static_cast<size_t>(i)];
      }
    }
    apply_bcs(s);
    if (!finite(s.fields)) {
      out.reason = "non-finite values after step";
      return false;
    }
    const IsentropicWork w2 = isentropic_work(s, params_);
    out.min_h_or_q = w2.min_h;
    if (!w2.admissible) {
      out.reason = w2.violation;
      return false;
    }
    return true;
  }

  bool attempt_noniso(State& s, double dt, StepOutcome& out) const {
    const GridSpec& g = s.grid;
    const NonIsoWork w = noniso_work(s, params_, *outflow_, s.time);
    out.min_h_or_q = w.min_q;
    if (!w.admissible) {
      out.reason = w.violation;
      return false;
    }
    const auto tend = noniso_tendency(s, w, params_, source_, false);
    for (int c = 0; c < 3; ++c)
      for (size_t i = 0; i < s.fields[static_cast<size_t>(c)].data.size(); ++i)
        s.fields[static_cast<size_t>(c)].data[i] += dt * tend[static_cast<size_t>(c)].data[i];

    const int n = g.ny - 2;
    std::vector<Mat3> sub(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
        sup(static_cast<size_t>(n));
    std::vector<Vec3> rhs(static_cast<size_t>(n));
    const double mu = dt / (g.dy() * g.dy());
    for (int ix = 0; ix < g.nx; ++ix) {
      const OutflowTraces& tr = w.traces[static_cast<size_t>(ix)];
      for (int i = 0; i < n; ++i) {
        const int iy = i + 1;
        const double th = w.theta(ix, iy), q = w.q(ix, iy), Q = w.Qf(ix, iy);
        const double pg = tr.P - q, ps = tr.P + q;
        Mat3 B0 = Mat3::zero();
        B0(0, 0) = 2.0 * q * params_.R * th / pg;
        B0(1, 1) = 2.0 * q * w.a * th * ps / (Q * pg);
        B0(1, 2) = -2.0 * q * w.a * th / Q;
        B0(2, 1) = -4.0 * w.a * q * q / Q;
        B0(2, 2) = 2.0 * q * pg / Q;
        if (B0(0, 0) < opts_.diffusivity_floor || B0(2, 2) < opts_.diffusivity_floor) {
          out.reason = "degenerate diffusivity at a node";
          return false;
        }
        sub[static_cast<size_t>(i)] = B0 * (-mu);
        diag[static_cast<size_t>(i)] = Mat3::identity() + B0 * (2.0 * mu);
        sup[static_cast<size_t>(i)] = B0 * (-mu);
        rhs[static_cast<size_t>(i)] = {{s.fields[0](ix, iy), s.fields[1](ix, iy),
                                        s.fields[2](ix, iy)}};
      }
      {
        // wall closure: u = theta_tilde = 0; q_tilde eliminated via
        // q0 = (4 q1 - q2)/3 acting through the sub-block's third column
        const Mat3 s0 = sub[0];
        for (int r = 0; r < 3; ++r) {
          diag[0](r, 2) += s0(r, 2) * 4.0 / 3.0;
          sup[0](r, 2) += -s0(r, 2) / 3.0;
        }
      }
      try {
        solve_block3_tridiag(sub, diag, sup, rhs);
      } catch (const degeneracy_error& e) {
        out.reason = e.what();
        return false;
      } catch (const step_failure& e) {
        out.reason = e.what();
        return false;
      }
      for (int i = 0; i < n; ++i) {
        s.fields[0](ix, i + 1) = rhs[static_cast<size_t>(i)][0];
        s.fields[1](ix, i + 1) = rhs[static_cast<size_t>(i)][1];
        s.fields[2](ix, i + 1) = rhs[static_cast<size_t>(i)][2];
      }
    }
    apply_bcs(s);
    if (!finite(s.fields)) {
      out.reason = "non-finite values after step";
      return false;
    }
    const NonIsoWork w2 = noniso_work(s, params_, *outflow_, s.time + dt);
    out.min_h_or_q = w2.min_q;
    if (!w2.admissible) {
      out.reason = w2.violation;
      return false;
    }
    return true;
  }

  ModelParams params_;
  SolverOptions opts_;
  const OutflowSpec* outflow_;
  const SourceTerm* source_;
};

// Standalone implicit-diffusion column solve, the same discrete operator the
// stepper uses.  Exposed for the pure-diffusion probes and property tests.
//   bc_neumann_wall = false: Dirichlet 0 at both ends
//   bc_neumann_wall = true:  one-sided Neumann closure at y = 0
inline std::vector<double> diffusion_column_solve(const std::vector<double>& f,
                                                  const std::vector<double>& nu, double dt,
                                                  double dy, bool bc_neumann_wall) {
  const int ny = static_cast<int>(f.size());
  const int n = ny - 2;
  std::vector<double> sub(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
      sup(static_cast<size_t>(n)), rhs(static_cast<size_t>(n));
  const double mu = dt / (dy * dy);
  for (int i = 0; i < n; ++i) {
    const double lam = mu * nu[static_cast<size_t>(i + 1)];
    sub[static_cast<size_t>(i)] = -lam;
    diag[static_cast<size_t>(i)] = 1.0 + 2.0 * lam;
    sup[static_cast<size_t>(i)] = -lam;
    rhs[static_cast<size_t>(i)] = f[static_cast<size_t>(i + 1)];
  }
  if (bc_neumann_wall) {
    const double lam = -sub[0];
    diag[0] -= lam * 4.0 / 3.0;
    sup[0] += lam / 3.0;
  }
  solve_tridiag(sub, diag, sup, rhs);
  std::vector<double> out(static_cast<size_t>(ny), 0.0);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i + 1)] = rhs[static_cast<size_t>(i)];
  out[0] = bc_neumann_wall ? (4.0 * out[1] - out[2]) / 3.0 : 0.0;
  out[static_cast<size_t>(ny - 1)] = 0.0;
  return out;
}

}  // namespace mhdbl
