#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mhdbl/fd.hpp"
#include "mhdbl/physics.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

// ---------------------------------------------------------------------------
// Time-derivative ladder.  Order 0 is the field itself; order 1 is the PDE
// right side (exact in the continuum); orders 2 and 3 are Newton divided
// differences over the history ring, valid on nonuniform step sizes.

namespace detail {

inline Field divided_difference2(const TimeLevel& l0, const TimeLevel& l1, const TimeLevel& l2,
                                 int comp) {
  // l0 oldest .. l2 newest; returns 2! * f[t0,t1,t2] ~ d2f/dt2
  const Field& f0 = l0.fields[static_cast<size_t>(comp)];
  const Field& f1 = l1.fields[static_cast<size_t>(comp)];
  const Field& f2 = l2.fields[static_cast<size_t>(comp)];
  Field r(f0.nx, f0.ny);
  const double d01 = l1.t - l0.t, d12 = l2.t - l1.t, d02 = l2.t - l0.t;
  for (size_t i = 0; i < r.data.size(); ++i) {
    const double s01 = (f1.data[i] - f0.data[i]) / d01;
    const double s12 = (f2.data[i] - f1.data[i]) / d12;
    r.data[i] = 2.0 * (s12 - s01) / d02;
  }
  return r;
}

inline Field divided_difference3(const TimeLevel& l0, const TimeLevel& l1, const TimeLevel& l2,
                                 const TimeLevel& l3, int comp) {
  const Field& f0 = l0.fields[static_cast<size_t>(comp)];
  const Field& f1 = l1.fields[static_cast<size_t>(comp)];
  const Field& f2 = l2.fields[static_cast<size_t>(comp)];
  const Field& f3 = l3.fields[static_cast<size_t>(comp)];
  Field r(f0.nx, f0.ny);
  const double d01 = l1.t - l0.t, d12 = l2.t - l1.t, d23 = l3.t - l2.t;
  const double d02 = l2.t - l0.t, d13 = l3.t - l1.t, d03 = l3.t - l0.t;
  for (size_t i = 0; i < r.data.size(); ++i) {
    const double s01 = (f1.data[i] - f0.data[i]) / d01;
    const double s12 = (f2.data[i] - f1.data[i]) / d12;
    const double s23 = (f3.data[i] - f2.data[i]) / d23;
    const double dd012 = (s12 - s01) / d02;
    const double dd123 = (s23 - s12) / d13;
    r.data[i] = 6.0 * (dd123 - dd012) / d03;
  }
  return r;
}

// How many time-derivative orders the history supports (order 1 always: PDE).
inline int available_time_order(size_t levels) {
  if (levels >= 4) return 3;
  if (levels >= 3) return 2;
  return 1;
}

inline std::vector<Field> time_ladder(const State& s, const Field& dt_field, int comp,
                                      int max_order) {
  std::vector<Field> ladder;
  ladder.push_back(s.fields[static_cast<size_t>(comp)]);
  if (max_order >= 1) ladder.push_back(dt_field);
  const size_t n = s.history.size();
  if (max_order >= 2 && n >= 3)
    ladder.push_back(divided_difference2(s.history[n - 3], s.history[n - 2], s.history[n - 1],
                                         comp));
  if (max_order >= 3 && n >= 4)
    ladder.push_back(divided_difference3(s.history[n - 4], s.history[n - 3], s.history[n - 2],
                                         s.history[n - 1], comp));
  return ladder;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct TermKey {
  int alpha_t = 0, alpha_x = 0, beta = 0, comp = 0;
  auto operator<=>(const TermKey&) const = default;
};

struct EnergyReport {
  double t = 0.0;
  double E = 0.0;
  double D = 0.0;
  std::map<TermKey, double> per_term;  // contributions to E (weights included)
  bool warmup = false;
  int alpha_t_available = 3;
};

// Weighted anisotropic energy E and dissipation D of the state:
//   E = M sum_{|alpha|<=3} ||sqrt(w) dtau^alpha v||^2
//       + sum_{|alpha|<=2} ||sqrt(w) dtau^alpha dy v||^2
//   D = M ||dy v||^2_{H^{3,0}} + ||dy v||^2_{H^{2,1}}      (unweighted)
// dt_fields are the PDE time derivatives of the components at s.time;
// weights holds one pointwise weight field per component.
inline EnergyReport energy_report(const State& s, const std::vector<Field>& dt_fields,
                                  const std::vector<Field>& weights, double M) {
  EnergyReport rep;
  rep.t = s.time;
  const GridSpec& g = s.grid;
  rep.alpha_t_available = detail::available_time_order(s.history.size());
  rep.warmup = rep.alpha_t_available < 3;
  for (int comp = 0; comp < s.components(); ++comp) {
    const Field& w = weights[static_cast<size_t>(comp)];
    const auto ladder = detail::time_ladder(s, dt_fields[static_cast<size_t>(comp)], comp,
                                            rep.alpha_t_available);
    for (int at = 0; at < static_cast<int>(ladder.size()); ++at) {
      Field fx = ladder[static_cast<size_t>(at)];
      for (int ax = 0; ax + at <= 3; ++ax) {
        if (ax > 0) fx = ddx(fx, g);
        const int ord = at + ax;
        const double tang = weighted_l2_sq(fx, g, &w);
        rep.E += M * tang;
        rep.per_term[{at, ax, 0, comp}] = M * tang;
        const Field fy = ddy(fx, g);
        rep.D += M * weighted_l2_sq(fy, g);
        if (ord <= 2) {
          const double norm = weighted_l2_sq(fy, g, &w);
          rep.E += norm;
          rep.per_term[{at, ax, 1, comp}] = norm;
          const Field fyy = d2y(fx, g);
          rep.D += weighted_l2_sq(fy, g) + weighted_l2_sq(fyy, g);
        }
      }
    }
  }
  return rep;
}

// Single-field H^{k,l} squared norm with an optional pointwise weight, on the
// same discrete machinery as energy_report.  dt_field may be null when k
// should not include time derivatives (a steady field).
inline double hkl_norm_sq(const State& s, int comp, const Field* dt_field, int k, int l,
                          const Field* weight, bool* warmup = nullptr) {
  const GridSpec& g = s.grid;
  const int avail = std::min(k, detail::available_time_order(s.history.size()));
  if (warmup) *warmup = avail < k;
  Field zero(g);
  const auto ladder =
      detail::time_ladder(s, dt_field ? *dt_field : zero, comp, dt_field ? avail : 0);
  double total = 0.0;
  for (int at = 0; at < static_cast<int>(ladder.size()); ++at) {
    Field fx = ladder[static_cast<size_t>(at)];
    for (int ax = 0; ax + at <= k; ++ax) {
      if (ax > 0) fx = ddx(fx, g);
      total += weighted_l2_sq(fx, g, weight);
      if (l >= 1) {
        const Field fy = ddy(fx, g);
        total += weighted_l2_sq(fy, g, weight);
      }
    }
  }
  return total;
}

// Convenience wrapper: assembles weights and PDE time derivatives for the
// state's regime and returns the full report.
inline EnergyReport compute_energy(const State& s, const ModelParams& p,
                                   const OutflowSpec* outflow = nullptr,
                                   const SourceTerm* src = nullptr) {
  std::vector<Field> weights;
  if (s.regime == Regime::Isentropic) {
    const IsentropicWork w = isentropic_work(s, p);
    if (!w.admissible) throw admissibility_error(w.violation);
    weights.push_back(w.B);
    weights.push_back(w.A);
  } else {
    if (!outflow) throw construction_error("non-isentropic energy needs an outflow");
    const NonIsoWork w = noniso_work(s, p, *outflow, s.time);
    if (!w.admissible) throw admissibility_error(w.violation);
    Field G1(s.grid), G2(s.grid), G3(s.grid);
    for (int ix = 0; ix < s.grid.nx; ++ix) {
      const double P = w.traces[static_cast<size_t>(ix)].P;
      for (int iy = 0; iy < s.grid.ny; ++iy) {
        const double th = w.theta(ix, iy), q = w.q(ix, iy);
        const double pg = P - q;
        G1(ix, iy) = th * pg / p.R;
        G2(ix, iy) = pg / w.a;
        G3(ix, iy) = 0.5 * th * th / q * (P + q) / pg;
      }
    }
    weights.push_back(std::move(G1));
    weights.push_back(std::move(G2));
    weights.push_back(std::move(G3));
  }
  const auto dt_fields = pde_time_derivative(s, p, outflow, src);
  return energy_report(s, dt_fields, weights, p.M_weight);
}

// ---------------------------------------------------------------------------
// A priori bound monitor: first crossings of threshold * eps^2, with the
// crossing time refined by linear interpolation between bracketing samples.

class AprioriMonitor {
 public:
  AprioriMonitor(double epsilon, double thr_lo = 4.0, double thr_hi = 8.0)
      : lo_(thr_lo * epsilon * epsilon), hi_(thr_hi * epsilon * epsilon) {}

  void feed(double t, double E) {
    if (has_prev_) {
      if (!t_lo_ && E > lo_) t_lo_ = cross(t, E, lo_);
      if (!t_hi_ && E > hi_) t_hi_ = cross(t, E, hi_);
    } else {
      if (E > lo_) t_lo_ = t;
      if (E > hi_) t_hi_ = t;
    }
    prev_t_ = t;
    prev_E_ = E;
    has_prev_ = true;
  }

  std::optional<double> breach_lo() const { return t_lo_; }
  std::optional<double> breach_hi() const { return t_hi_; }

 private:
  double cross(double t, double E, double thr) const {
    if (E <= prev_E_) return t;
    const double s = (thr - prev_E_) / (E - prev_E_);
    return prev_t_ + std::clamp(s, 0.0, 1.0) * (t - prev_t_);
  }
  double lo_, hi_;
  std::optional<double> t_lo_, t_hi_;
  double prev_t_ = 0.0, prev_E_ = 0.0;
  bool has_prev_ = false;
};

// ---------------------------------------------------------------------------
// Gronwall-structure check along a trajectory energy log.

struct EnergyRow {
  double t = 0.0;
  double E = 0.0;
  double D = 0.0;
  bool breach4 = false, breach8 = false, warmup = false;
  double dt = 0.0;
  double min_h_or_q = 0.0;
};

struct GronwallReport {
  double C_hat = 0.0;       // coefficient of E^{5/3}
  double Cf_hat = 0.0;      // coefficient of f(t) E^{1/2}
  double c0 = 0.0;          // dissipation coefficient used on the left side
  double violation_fraction = 0.0;
  bool envelope_ok = false;
  double max_E_over_envelope = 0.0;
  int samples_used = 0;
  std::vector<std::pair<double, double>> c0_scan;  // (c0, fitted C) diagnostics
};

struct GronwallOptions {
  double c0_max = 2.0;
  int c0_grid = 20;
  int cf_grid = 24;
};

// Fits the smallest constants with dE/dt + c0 D <= C E^{5/3} + Cf f E^{1/2}
// (least-max over the post-warmup samples), then integrates the Gronwall
// envelope  env(t) = (E0 + int Cf f sqrt(E)) exp(int C E^{2/3})  with the
// measured E inside the integrals and compares it against the log.
inline GronwallReport gronwall_check(const std::vector<EnergyRow>& rows,
                                     const std::function<double(double)>& f_of_t = nullptr,
                                     const GronwallOptions& opt = {}) {
  std::vector<double> t, E, D, f;
  for (const auto& r : rows) {
    if (r.warmup) continue;
    t.push_back(r.t);
    E.push_back(r.E);
    D.push_back(r.D);
    f.push_back(f_of_t ? f_of_t(r.t) : 0.0);
  }
  const size_t n = t.size();
  if (n < 10) throw insufficient_data("gronwall_check needs at least 10 post-warmup samples");

  std::vector<double> dEdt(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t a = i == 0 ? 0 : i - 1;
    const size_t b = i + 1 == n ? i : i + 1;
    dEdt[i] = (E[b] - E[a]) / (t[b] - t[a]);
  }

  const bool has_f = [&] {
    for (double v : f)
      if (v != 0.0) return true;
    return false;
  }();

  auto fit_for_c0 = [&](double c0, double& C_out, double& Cf_out) {
    // least-max C for given Cf: C = max_i (r_i - Cf z_i)/x_i, clipped at 0
    std::vector<double> x(n), z(n), r(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = std::pow(std::max(E[i], 0.0), 5.0 / 3.0);
      z[i] = f[i] * std::sqrt(std::max(E[i], 0.0));
      r[i] = dEdt[i] + c0 * D[i];
    }
    auto C_given_cf = [&](double cf) {
      double c = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0) continue;
        c = std::max(c, (r[i] - cf * z[i]) / x[i]);
      }
      return c;
    };
    if (!has_f) {
      C_out = C_given_cf(0.0);
      Cf_out = 0.0;
      return;
    }
    // scan Cf over [0, cf_hi]; pick the pair with the smallest envelope
    // magnitude at the median scales
    double cf_hi = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (z[i] > 0.0) cf_hi = std::max(cf_hi, std::max(r[i], 0.0) / z[i]);
    auto med = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    const double mx = med(x), mz = med(z);
    double best_obj = std::numeric_limits<double>::infinity(), bc = 0.0, bcf = 0.0;
    for (int k = 0; k <= opt.cf_grid; ++k) {
      const double cf = cf_hi * k / opt.cf_grid;
      const double c = C_given_cf(cf);
      const double obj = c * mx + cf * mz;
      if (obj < best_obj) {
        best_obj = obj;
        bc = c;
        bcf = cf;
      }
    }
    C_out = bc;
    Cf_out = bcf;
  };

  GronwallReport rep;
  rep.samples_used = static_cast<int>(n);
  for (int k = 0; k < opt.c0_grid; ++k) {
    const double c0 = opt.c0_max * (k + 1) / opt.c0_grid;
    double C = 0.0, Cf = 0.0;
    fit_for_c0(c0, C, Cf);
    rep.c0_scan.emplace_back(c0, C);
  }
  // smallest positive c0 on the grid: the mildest dissipation retention
  rep.c0 = opt.c0_max / opt.c0_grid;
  fit_for_c0(rep.c0, rep.C_hat, rep.Cf_hat);

  int violations = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lhs = dEdt[i] + rep.c0 * D[i];
    const double rhs = rep.C_hat * std::pow(std::max(E[i], 0.0), 5.0 / 3.0) +
                       rep.Cf_hat * f[i] * std::sqrt(std::max(E[i], 0.0));
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ++violations;
  }
  rep.violation_fraction = static_cast<double>(violations) / static_cast<double>(n);

  // envelope; trapezoid accumulation of the integrals with measured E
  double int_c = 0.0, int_f = 0.0;
  rep.envelope_ok = true;
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double dt = t[i] - t[i - 1];
      auto e23 = [&](size_t j) { return std::pow(std::max(E[j], 0.0), 2.0 / 3.0); };
      auto fe12 = [&](size_t j) { return f[j] * std::sqrt(std::max(E[j], 0.0)); };
      int_c += 0.5 * dt * rep.C_hat * (e23(i - 1) + e23(i));
      int_f += 0.5 * dt * rep.Cf_hat * (fe12(i - 1) + fe12(i));
    }
    const double env = (E[0] + int_f) * std::exp(int_c);
    const double ratio = env > 0.0 ? E[i] / env : (E[i] > 0.0 ? 1e300 : 0.0);
    rep.max_E_over_envelope = std::max(rep.max_E_over_envelope, ratio);
    if (E[i] > env * (1.0 + 1e-6) + 1e-300) rep.envelope_ok = false;
  }
  return rep;
}

}  // namespace mhdbl
