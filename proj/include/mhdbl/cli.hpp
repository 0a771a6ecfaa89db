#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhdbl/report_io.hpp"
#include "mhdbl/run.hpp"

namespace mhdbl {

namespace detail {

inline std::string resolve_output_dir(const std::string& flag_dir, const std::string& cfg_dir) {
  if (const char* env = std::getenv("MHDBL_OUTPUT_DIR"); env && *env) return env;
  if (!flag_dir.empty()) return flag_dir;
  return cfg_dir;
}

inline bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

inline int load_config_or_fail(const std::string& path, RunConfig& cfg) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    return 2;
  }
  const ParseResult pr = parse_config(text);
  for (const auto& w : pr.warnings) std::cerr << "warning: " << w << "\n";
  if (!pr.ok) {
    for (const auto& e : pr.errors) {
      if (e.line > 0)
        std::cerr << "config error (line " << e.line << "): " << e.message << "\n";
      else
        std::cerr << "config error: " << e.message << "\n";
    }
    return 2;
  }
  cfg = pr.config;
  return 0;
}

inline std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace detail

// Exit status: 0 success, 1 scientific failure (breach / violated invariant),
// 2 usage or configuration error.
inline int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"mhdbl: compressible MHD boundary-layer laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir_flag, eps_csv, regime_str = "isentropic",
                           mode = "both", from_run, from_sweep;
  long samples = 10000;
  std::uint64_t seed = 42;
  std::vector<int> ny_list = {128, 256, 512, 1024};
  double max_error = -1.0, min_space_order = -1.0, min_time_order = -1.0;
  long horizon_steps = -1;

  auto* sim = app.add_subcommand("simulate", "integrate one configured trajectory");
  sim->add_option("--config", config_path, "TOML-style run configuration")->required();
  sim->add_option("--output-dir", out_dir_flag, "override the output directory");

  auto* swp = app.add_subcommand("sweep", "lifespan sweep over a list of epsilons");
  swp->add_option("--config", config_path, "base run configuration")->required();
  swp->add_option("--epsilons", eps_csv, "comma-separated epsilon list")->required();
  swp->add_option("--horizon-steps", horizon_steps, "override run.max_steps per entry");
  swp->add_option("--output-dir", out_dir_flag, "override the output directory");

  auto* ver = app.add_subcommand("verify-algebra", "randomized algebraic identity suite");
  ver->add_option("--samples", samples, "number of sampled states");
  ver->add_option("--seed", seed, "RNG seed");
  ver->add_option("--output-dir", out_dir_flag, "report directory (default out)");

  auto* cnv = app.add_subcommand("convergence", "manufactured-solution order studies");
  cnv->add_option("--regime", regime_str, "isentropic | non-isentropic");
  cnv->add_option("--mode", mode, "space | time | both");
  cnv->add_option("--min-space-order", min_space_order, "fail below this spatial order");
  cnv->add_option("--min-time-order", min_time_order, "fail below this temporal order");
  cnv->add_option("--output-dir", out_dir_flag, "report directory (default out)");

  auto* trt = app.add_subcommand("transform-roundtrip", "stream-function round-trip fidelity");
  trt->add_option("--ny-list", ny_list, "grid ladder");
  trt->add_option("--max-error", max_error, "fail if the finest-grid error exceeds this");
  trt->add_option("--output-dir", out_dir_flag, "report directory (default out)");

  auto* plt = app.add_subcommand("emit-plots", "plot-ready CSVs from run artifacts");
  plt->add_option("--run-dir", from_run, "directory holding an energy.csv");
  plt->add_option("--sweep", from_sweep, "sweep.json to re-emit as plot data");
  plt->add_option("--output-dir", out_dir_flag, "destination directory");

  std::vector<const char*> argv;
  argv.push_back("mhdbl");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    const int rc = app.exit(e, dummy, dummy);
    std::cerr << dummy.str();
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      RunConfig cfg;
      if (const int rc = detail::load_config_or_fail(config_path, cfg); rc != 0) return rc;
      const std::string dir = detail::resolve_output_dir(out_dir_flag, cfg.output_directory);
      ensure_directory(dir);
      const std::string hash = config_hash(cfg);
      EnergyLogWriter log(dir + "/energy.csv", hash);
      RunHooks hooks;
      hooks.on_row = [&](const EnergyRow& r) { log.append(r); };
      hooks.on_snapshot = [&](const State& s, long step) {
        write_snapshot_json(dir + "/snapshot_" + std::to_string(step) + ".json", s, hash);
      };
      const RunResult res = run_simulation(cfg, hooks);
      log.flush();
      write_snapshot_json(dir + "/final_snapshot.json", res.final_state, hash);
      write_energy_plot_csv(dir + "/plot_energy.csv", res.rows, hash);
      nlohmann::json summary = {
          {"version", kVersion},
          {"config_hash", hash},
          {"termination", termination_name(res.termination)},
          {"detail", res.detail},
          {"steps", res.steps},
          {"t_final", res.t_final},
          {"T_breach_4", res.T_breach4 ? nlohmann::json(*res.T_breach4) : nlohmann::json(nullptr)},
          {"T_breach_8", res.T_breach8 ? nlohmann::json(*res.T_breach8) : nlohmann::json(nullptr)},
          {"max_boundary_residual", res.max_boundary_residual}};
      std::ofstream(dir + "/run_summary.json") << summary.dump(2) << "\n";
      std::cout << "termination: " << termination_name(res.termination) << " after "
                << res.steps << " steps, t = " << res.t_final << "\n";
      return res.termination == Termination::Horizon || res.termination == Termination::MaxSteps
                 ? 0
                 : 1;
    }

    if (swp->parsed()) {
      RunConfig cfg;
      if (const int rc = detail::load_config_or_fail(config_path, cfg); rc != 0) return rc;
      if (horizon_steps > 0) cfg.max_steps = horizon_steps;
      const auto eps = detail::parse_eps_list(eps_csv);
      if (eps.size() < 1) {
        std::cerr << "error: --epsilons needs at least one value\n";
        return 2;
      }
      const std::string dir = detail::resolve_output_dir(out_dir_flag, cfg.output_directory);
      ensure_directory(dir);
      const std::string hash = config_hash(cfg);
      const SweepResult sw = lifespan_sweep(cfg, eps, [&](double e, const RunResult& r) {
        std::ostringstream sub;
        sub << dir << "/eps_" << e;
        ensure_directory(sub.str());
        write_energy_csv(sub.str() + "/energy.csv", r.rows, hash);
      });
      write_sweep_json(dir + "/sweep.json", sw, hash);
      write_sweep_csv(dir + "/sweep.csv", sw, hash);
      write_sweep_plot_csv(dir + "/plot_sweep.csv", sw, hash);
      std::cout << "sweep: " << sw.entries.size() << " entries, valid=" << sw.valid
                << " theorem_check=" << (sw.check.pass ? "pass" : "fail") << "\n";
      return sw.valid && sw.check.pass ? 0 : 1;
    }

    if (ver->parsed()) {
      const std::string dir = detail::resolve_output_dir(out_dir_flag, "out");
      ensure_directory(dir);
      const AlgebraReport rep = verify_algebra(samples, seed);
      std::ofstream(dir + "/verify_algebra.json") << algebra_to_json(rep).dump(2) << "\n";
      std::cout << "verify-algebra: " << rep.samples << " samples, "
                << (rep.pass ? "pass" : "FAIL") << " (max identity err "
                << rep.max_coeff_identity_err << ")\n";
      return rep.pass ? 0 : 1;
    }

    if (cnv->parsed()) {
      const Regime regime =
          regime_str == "non-isentropic" ? Regime::NonIsentropic : Regime::Isentropic;
      const std::string dir = detail::resolve_output_dir(out_dir_flag, "out");
      ensure_directory(dir);
      int rc = 0;
      nlohmann::json j = {{"version", kVersion}, {"regime", regime_name(regime)}};
      if (mode == "space" || mode == "both") {
        const ConvStudy st = convergence_space(regime);
        write_orders_csv(dir + "/orders_space.csv", st, "space");
        j["space"] = convergence_to_json(st);
        std::cout << "spatial order (L2): " << (st.order_l2 ? *st.order_l2 : 0.0) << "\n";
        if (min_space_order > 0 && (!st.order_l2 || *st.order_l2 < min_space_order)) rc = 1;
      }
      if (mode == "time" || mode == "both") {
        const ConvStudy st = convergence_time(regime);
        write_orders_csv(dir + "/orders_time.csv", st, "time");
        j["time"] = convergence_to_json(st);
        std::cout << "temporal order (L2): " << (st.order_l2 ? *st.order_l2 : 0.0) << "\n";
        if (min_time_order > 0 && (!st.order_l2 || *st.order_l2 < min_time_order)) rc = 1;
      }
      std::ofstream(dir + "/convergence.json") << j.dump(2) << "\n";
      return rc;
    }

    if (trt->parsed()) {
      const std::string dir = detail::resolve_output_dir(out_dir_flag, "out");
      ensure_directory(dir);
      const RoundTripStudy st = transform_roundtrip_study(ny_list);
      std::ofstream out(dir + "/transform_roundtrip.csv");
      out << "# mhdbl version=" << kVersion << "\n";
      out << "ny,sup_error\n";
      for (const auto& r : st.rows) out << r.ny << ',' << fmt17(r.err) << "\n";
      out << "# order=" << (st.order ? fmt17(*st.order) : "n/a") << "\n";
      std::cout << "roundtrip error at ny=" << st.rows.back().ny << ": " << st.rows.back().err
                << " (order " << (st.order ? *st.order : 0.0) << ")\n";
      if (max_error > 0 && st.rows.back().err > max_error) return 1;
      return 0;
    }

    if (plt->parsed()) {
      const std::string dir = detail::resolve_output_dir(out_dir_flag, "out");
      ensure_directory(dir);
      if (!from_sweep.empty()) {
        std::ifstream in(from_sweep);
        if (!in) {
          std::cerr << "error: cannot open " << from_sweep << "\n";
          return 2;
        }
        nlohmann::json j;
        in >> j;
        std::ofstream out(dir + "/plot_sweep.csv");
        out << "# mhdbl version=" << kVersion << "\n";
        out << "log_eps,log_T4,log_T_ref\n";
        const bool anchored = j["theorem_check"]["anchored"].get<bool>();
        const double cfit = j["theorem_check"]["C_fit"].get<double>();
        for (const auto& e : j["entries"]) {
          if (e["T_breach_4"].is_null()) continue;
          const double le = std::log(e["epsilon"].get<double>());
          const double lt = std::log(e["T_breach_4"].get<double>());
          const double ref = anchored ? std::log(cfit) - 4.0 / 3.0 * le
                                      : std::numeric_limits<double>::quiet_NaN();
          out << fmt17(le) << ',' << fmt17(lt) << ',' << fmt17(ref) << "\n";
        }
      }
      if (!from_run.empty()) {
        std::ifstream in(from_run + "/energy.csv");
        if (!in) {
          std::cerr << "error: cannot open " << from_run << "/energy.csv\n";
          return 2;
        }
        std::ofstream out(dir + "/plot_energy.csv");
        std::string line;
        bool header_done = false;
        out << "t,E,D\n";
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#') continue;
          if (!header_done) {
            header_done = true;  // column header
            continue;
          }
          std::stringstream ss(line);
          std::string t, E, D;
          std::getline(ss, t, ',');
          std::getline(ss, E, ',');
          std::getline(ss, D, ',');
          out << t << ',' << E << ',' << D << "\n";
        }
      }
      return 0;
    }
  } catch (const construction_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mhdbl
