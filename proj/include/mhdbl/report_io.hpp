#pragma once

#include <fstream>

#include <json.hpp>

#include "mhdbl/experiments.hpp"
#include "mhdbl/io.hpp"

namespace mhdbl {

inline nlohmann::json sweep_to_json(const SweepResult& sw, const std::string& cfg_hash) {
  nlohmann::json j;
  j["meta"] = {{"version", kVersion}, {"config_hash", cfg_hash}};
  j["valid"] = sw.valid;
  if (!sw.valid) j["diagnostics"] = sw.diagnostics;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : sw.entries) {
    nlohmann::json je = {{"epsilon", e.epsilon},
                         {"termination", e.termination},
                         {"gronwall_C_hat", e.gronwall_C_hat},
                         {"steps", e.steps},
                         {"E_final", e.E_final}};
    je["T_breach_4"] = e.T4 ? nlohmann::json(*e.T4) : nlohmann::json(nullptr);
    je["T_breach_8"] = e.T8 ? nlohmann::json(*e.T8) : nlohmann::json(nullptr);
    j["entries"].push_back(je);
  }
  if (sw.fit) {
    j["fit"] = {{"slope", sw.fit->slope},
                {"intercept", sw.fit->intercept},
                {"residuals", sw.fit->residuals}};
  } else {
    j["fit"] = nullptr;
    j["fit_unavailable_reason"] = sw.fit_unavailable_reason;
  }
  nlohmann::json chk = {{"anchored", sw.check.anchored},
                        {"C_fit", sw.check.C_fit},
                        {"pass", sw.check.pass}};
  chk["rows"] = nlohmann::json::array();
  for (const auto& r : sw.check.rows) {
    nlohmann::json jr = {{"epsilon", r.epsilon}, {"required_T", r.required_T}, {"pass", r.pass}};
    jr["actual_T"] = r.actual_T ? nlohmann::json(*r.actual_T) : nlohmann::json(nullptr);
    chk["rows"].push_back(jr);
  }
  j["theorem_check"] = chk;
  return j;
}

inline void write_sweep_json(const std::string& path, const SweepResult& sw,
                             const std::string& cfg_hash) {
  std::ofstream out(path);
  if (!out) throw construction_error("cannot open sweep report: " + path);
  out << sweep_to_json(sw, cfg_hash).dump(2) << "\n";
}

inline void write_sweep_csv(const std::string& path, const SweepResult& sw,
                            const std::string& cfg_hash) {
  std::ofstream out(path);
  if (!out) throw construction_error("cannot open sweep csv: " + path);
  out << "# mhdbl version=" << kVersion << " config_hash=" << cfg_hash << "\n";
  out << "epsilon,T_breach_4,T_breach_8,termination\n";
  for (const auto& e : sw.entries) {
    out << fmt17(e.epsilon) << ',' << (e.T4 ? fmt17(*e.T4) : "") << ','
        << (e.T8 ? fmt17(*e.T8) : "") << ',' << e.termination << "\n";
  }
}

// Plot data: log T against log eps plus the anchored eps^{-4/3} reference.
inline void write_sweep_plot_csv(const std::string& path, const SweepResult& sw,
                                 const std::string& cfg_hash) {
  std::ofstream out(path);
  if (!out) throw construction_error("cannot open sweep plot csv: " + path);
  out << "# mhdbl version=" << kVersion << " config_hash=" << cfg_hash << "\n";
  out << "log_eps,log_T4,log_T_ref\n";
  for (const auto& e : sw.entries) {
    if (!e.T4) continue;
    const double le = std::log(e.epsilon);
    const double ref = sw.check.anchored
                           ? std::log(sw.check.C_fit) - 4.0 / 3.0 * le
                           : std::numeric_limits<double>::quiet_NaN();
    out << fmt17(le) << ',' << fmt17(std::log(*e.T4)) << ',' << fmt17(ref) << "\n";
  }
}

inline nlohmann::json convergence_to_json(const ConvStudy& st) {
  nlohmann::json j;
  j["monotone"] = st.monotone;
  j["order_l2"] = st.order_l2 ? nlohmann::json(*st.order_l2) : nlohmann::json(nullptr);
  j["order_linf"] = st.order_linf ? nlohmann::json(*st.order_linf) : nlohmann::json(nullptr);
  j["rows"] = nlohmann::json::array();
  for (const auto& r : st.rows)
    j["rows"].push_back({{"nx", r.nx},
                         {"ny", r.ny},
                         {"dt", r.dt},
                         {"err_l2", r.err_l2},
                         {"err_linf", r.err_linf}});
  return j;
}

inline void write_orders_csv(const std::string& path, const ConvStudy& st,
                             const std::string& label) {
  std::ofstream out(path);
  if (!out) throw construction_error("cannot open orders csv: " + path);
  out << "# mhdbl version=" << kVersion << " study=" << label << "\n";
  out << "nx,ny,dt,err_l2,err_linf\n";
  for (const auto& r : st.rows)
    out << r.nx << ',' << r.ny << ',' << fmt17(r.dt) << ',' << fmt17(r.err_l2) << ','
        << fmt17(r.err_linf) << "\n";
  out << "# order_l2=" << (st.order_l2 ? fmt17(*st.order_l2) : "n/a")
      << " order_linf=" << (st.order_linf ? fmt17(*st.order_linf) : "n/a") << "\n";
}

inline nlohmann::json algebra_to_json(const AlgebraReport& r) {
  return {{"samples", r.samples},
          {"seed", r.seed},
          {"pass", r.pass},
          {"failures", r.failures},
          {"failure_notes", r.failure_notes},
          {"max_coeff_identity_err", r.max_coeff_identity_err},
          {"max_SA0_asymmetry", r.max_SA0_asymmetry},
          {"max_SB0_offdiag", r.max_SB0_offdiag},
          {"max_Bdiag_err", r.max_Bdiag_err},
          {"max_Gdiag_err", r.max_Gdiag_err},
          {"min_S_eigenvalue", r.min_S_eigenvalue},
          {"max_bernoulli_residual", r.max_bernoulli_residual}};
}

}  // namespace mhdbl
