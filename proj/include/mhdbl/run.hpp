#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mhdbl/config.hpp"
#include "mhdbl/energy.hpp"
#include "mhdbl/io.hpp"
#include "mhdbl/solver.hpp"

namespace mhdbl {

enum class Termination { Horizon, Breach, Admissibility, StepFailure, MaxSteps };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::Breach: return "breach";
    case Termination::Admissibility: return "admissibility";
    case Termination::StepFailure: return "step-failure";
    case Termination::MaxSteps: return "max-steps";
  }
  return "?";
}

struct RunResult {
  Termination termination = Termination::Horizon;
  std::string detail;
  long steps = 0;
  double t_final = 0.0;
  std::vector<EnergyRow> rows;
  std::optional<double> T_breach4, T_breach8;
  double max_boundary_residual = 0.0;  // isentropic wall identity, max over run
  State final_state;
};

struct RunHooks {
  std::function<void(const EnergyRow&)> on_row;
  std::function<void(const State&, long)> on_snapshot;  // at the configured cadence
};

// Domain objects from a validated RunConfig ----------------------------------

inline ModelParams model_params_from(const RunConfig& c) {
  ModelParams p;
  p.regime = c.regime == "isentropic" ? Regime::Isentropic : Regime::NonIsentropic;
  p.gamma = c.gamma;
  p.R = c.r_gas;
  p.M_weight = c.m_weight;
  p.validate();
  return p;
}

inline GridSpec grid_from(const RunConfig& c) {
  GridSpec g{c.nx, c.ny, c.y_max};
  g.validate();
  return g;
}

inline OutflowSpec outflow_from(const RunConfig& c, double horizon) {
  EnvelopeSpec env;
  env.epsilon = c.epsilon;
  env.sigma = c.of_sigma;
  env.g0 = c.of_g0;
  if (c.outflow_family == "uniform-steady")
    return OutflowSpec::uniform_steady(c.of_theta, c.of_h, c.of_theta_star, c.of_p, c.r_gas, env);
  if (c.outflow_family == "spatially-varying-steady")
    return OutflowSpec::spatially_varying_steady(c.of_p_bar, c.of_h, c.of_delta_h, c.of_theta,
                                                 c.of_delta_theta, c.of_theta_star,
                                                 c.of_delta_theta_star, c.r_gas, env);
  if (c.outflow_family == "time-varying-uniform-in-x")
    return OutflowSpec::time_varying_uniform_in_x(c.of_p, c.of_delta_p, c.of_theta, c.of_h,
                                                  c.of_delta_ts_t, c.r_gas, horizon, env);
  throw construction_error("unsupported outflow family: " + c.outflow_family);
}

inline ProfileSpec profile_from(const RunConfig& c) {
  ProfileSpec p;
  if (c.profile_type == "sine-exp") p.kind = ProfileKind::SineExp;
  else if (c.profile_type == "gaussian-bump") p.kind = ProfileKind::GaussianBump;
  else if (c.profile_type == "from-file") {
    p.kind = ProfileKind::FromFile;
    p.raw_fields = load_snapshot_json(c.profile_file).fields;
  } else {
    throw construction_error("unknown profile type: " + c.profile_type);
  }
  p.center = c.profile_center;
  p.width = c.profile_width;
  return p;
}

// -----------------------------------------------------------------------------
// Integrates one configured trajectory: per-step energy log, a priori breach
// monitor, wall-identity tracking, optional snapshot hook.  Deterministic for
// a given config.

inline RunResult run_simulation(const RunConfig& cfg, const RunHooks& hooks = {},
                                const SourceTerm* source = nullptr) {
  const ModelParams params = model_params_from(cfg);
  const GridSpec grid = grid_from(cfg);
  std::optional<OutflowSpec> outflow;
  if (params.regime == Regime::NonIsentropic) outflow.emplace(outflow_from(cfg, cfg.t_end));
  const OutflowSpec* ofp = outflow ? &*outflow : nullptr;

  State state = init_state(cfg.epsilon, profile_from(cfg), grid, params, ofp);
  SolverOptions opts;
  opts.cfl = cfg.cfl;
  Solver solver(params, opts, ofp, source);

  AprioriMonitor monitor(cfg.epsilon, cfg.threshold_lo, cfg.threshold_hi);
  const double thr_hi_abs = cfg.threshold_hi * cfg.epsilon * cfg.epsilon;
  const double thr_lo_abs = cfg.threshold_lo * cfg.epsilon * cfg.epsilon;

  RunResult res;
  auto log_state = [&](double dt_used, double min_h_or_q) {
    const EnergyReport rep = compute_energy(state, params, ofp, source);
    EnergyRow row;
    row.t = state.time;
    row.E = rep.E;
    row.D = rep.D;
    row.warmup = rep.warmup;
    row.dt = dt_used;
    row.min_h_or_q = min_h_or_q;
    row.breach4 = rep.E > thr_lo_abs;
    row.breach8 = rep.E > thr_hi_abs;
    monitor.feed(row.t, row.E);
    res.rows.push_back(row);
    if (hooks.on_row) hooks.on_row(row);
    if (params.regime == Regime::Isentropic)
      res.max_boundary_residual =
          std::max(res.max_boundary_residual, boundary_identity_residual(state));
    return row;
  };

  {
    double min0;
    if (params.regime == Regime::Isentropic) {
      min0 = isentropic_work(state, params).min_h;
    } else {
      min0 = noniso_work(state, params, *ofp, 0.0).min_q;
    }
    const EnergyRow row0 = log_state(0.0, min0);
    if (row0.breach8) {
      res.termination = Termination::Breach;
      res.detail = "initial energy above the a priori bound";
    }
  }

  while (res.termination != Termination::Breach) {
    if (state.time >= cfg.t_end - 1e-13) {
      res.termination = Termination::Horizon;
      break;
    }
    if (res.steps >= cfg.max_steps) {
      res.termination = Termination::MaxSteps;
      break;
    }
    double dt;
    try {
      dt = solver.suggest_dt(state);
    } catch (const admissibility_error& e) {
      res.termination = Termination::Admissibility;
      res.detail = e.what();
      break;
    }
    dt = std::min(dt, cfg.t_end - state.time);
    const StepOutcome outcome = solver.step(state, dt);
    if (!outcome.accepted) {
      const bool adm = outcome.reason.find("margin") != std::string::npos ||
                       outcome.reason.find("positivity") != std::string::npos;
      res.termination = adm ? Termination::Admissibility : Termination::StepFailure;
      res.detail = outcome.reason;
      break;
    }
    ++res.steps;
    const EnergyRow row = log_state(outcome.dt, outcome.min_h_or_q);
    if (hooks.on_snapshot && cfg.snapshot_cadence > 0 && res.steps % cfg.snapshot_cadence == 0)
      hooks.on_snapshot(state, res.steps);
    if (row.E > thr_hi_abs) {
      res.termination = Termination::Breach;
      res.detail = "energy exceeded the a priori bound";
      break;
    }
  }

  res.T_breach4 = monitor.breach_lo();
  res.T_breach8 = monitor.breach_hi();
  res.t_final = state.time;
  res.final_state = std::move(state);
  return res;
}

}  // namespace mhdbl
