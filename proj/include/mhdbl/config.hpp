#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mhdbl/errors.hpp"

namespace mhdbl {

// Run configuration, a 1:1 image of the TOML-style config file.  Domain
// objects (grid, model parameters, outflow, profile) are built from it by
// the run layer after validation.
struct RunConfig {
  // [model]
  std::string regime = "isentropic";
  double gamma = 1.4;
  double r_gas = 1.0;
  double m_weight = 4.0;

  // [grid]
  int nx = 64;
  int ny = 256;
  double y_max = 20.0;

  // [profile]
  std::string profile_type = "sine-exp";
  double profile_center = 6.0;
  double profile_width = 1.0;
  std::string profile_file;

  // [outflow]
  std::string outflow_family = "uniform-steady";
  double of_theta = 1.0;
  double of_h = 1.0;
  double of_theta_star = 1.0;
  double of_p = 1.5;
  double of_p_bar = 1.0;
  double of_delta_h = 0.0;
  double of_delta_theta = 0.0;
  double of_delta_theta_star = 0.0;
  double of_delta_p = 0.0;
  double of_delta_ts_t = 0.0;
  double of_sigma = 0.5;
  double of_g0 = 1.0;

  // [run]
  double epsilon = 0.01;
  double t_end = 1.0;
  long max_steps = 100000;
  double cfl = 0.4;
  double threshold_lo = 4.0;
  double threshold_hi = 8.0;
  std::uint64_t seed = 42;

  // [output]
  std::string output_directory = "out";
  long snapshot_cadence = 0;  // steps between snapshots; 0 = final only

  bool operator==(const RunConfig&) const = default;
};

struct ParseIssue {
  int line = 0;
  std::string message;
};

struct ParseResult {
  RunConfig config;
  bool ok = false;
  std::vector<ParseIssue> errors;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_number(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && end != s.c_str();
}

}  // namespace detail

// Collects every semantic violation, not just the first.
inline std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> v;
  const bool iso = c.regime == "isentropic";
  if (!iso && c.regime != "non-isentropic")
    v.push_back("model.regime must be \"isentropic\" or \"non-isentropic\"");
  if (iso && !(c.gamma >= 1.0)) v.push_back("model.gamma must satisfy gamma >= 1");
  if (!iso && !(c.r_gas > 0.0)) v.push_back("model.r must be positive");
  if (!(c.m_weight >= 1.0)) v.push_back("model.m_weight must satisfy M >= 1");
  if (c.nx < 8) v.push_back("grid.nx >= 8 required");
  if (c.ny < 16) v.push_back("grid.ny >= 16 required");
  if (!(c.y_max >= 10.0)) v.push_back("grid.y_max >= 10 required");
  if (c.profile_type != "sine-exp" && c.profile_type != "gaussian-bump" &&
      c.profile_type != "from-file")
    v.push_back("profile.type must be sine-exp, gaussian-bump or from-file");
  if (c.profile_type == "gaussian-bump" && !(c.profile_width > 0.0))
    v.push_back("profile.width must be positive");
  if (c.profile_type == "from-file" && c.profile_file.empty())
    v.push_back("profile.file required for profile.type = from-file");
  if (c.outflow_family != "uniform-steady" && c.outflow_family != "spatially-varying-steady" &&
      c.outflow_family != "time-varying-uniform-in-x")
    v.push_back("outflow.family unsupported (families combining x and t dependence "
                "are not constructible)");
  if (!(c.epsilon > 0.0)) v.push_back("run.epsilon must be positive");
  if (!(c.t_end >= 0.0)) v.push_back("run.t_end must be non-negative");
  if (c.max_steps < 0) v.push_back("run.max_steps must be non-negative");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) v.push_back("run.cfl must lie in (0, 1]");
  if (!(c.threshold_lo > 0.0 && c.threshold_hi > c.threshold_lo))
    v.push_back("run.thresholds must be positive and ascending");
  if (!(c.of_sigma > 0.0)) v.push_back("outflow.sigma must be positive");
  if (!(c.of_g0 > 0.0)) v.push_back("outflow.g0 must be positive");
  if (c.snapshot_cadence < 0) v.push_back("output.snapshot_cadence must be non-negative");
  return v;
}

// TOML-style subset: [section] headers, key = value lines, # comments,
// quoted strings, numbers, and [a, b] number pairs (run.thresholds).
// Unknown sections/keys are rejected; every violation is reported.
inline ParseResult parse_config(const std::string& text) {
  ParseResult res;
  RunConfig& c = res.config;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "grid" && section != "profile" &&
          section != "outflow" && section != "run" && section != "output")
        res.errors.push_back({lineno, "unknown section [" + section + "]"});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back({lineno, "expected key = value"});
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      res.errors.push_back({lineno, "expected key = value"});
      continue;
    }
    const std::string full = section + "." + key;
    seen.insert(full);

    auto str_of = [&](std::string& dst) {
      if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
        dst = val.substr(1, val.size() - 2);
      else
        res.errors.push_back({lineno, full + ": expected a quoted string"});
    };
    auto num_of = [&](double& dst) {
      double d;
      if (detail::parse_number(val, d))
        dst = d;
      else
        res.errors.push_back({lineno, full + ": expected a number"});
    };
    auto int_of = [&](auto& dst) {
      double d;
      if (detail::parse_number(val, d) && d == static_cast<long long>(d))
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(d);
      else
        res.errors.push_back({lineno, full + ": expected an integer"});
    };

    if (full == "model.regime") str_of(c.regime);
    else if (full == "model.gamma") num_of(c.gamma);
    else if (full == "model.r") num_of(c.r_gas);
    else if (full == "model.m_weight") num_of(c.m_weight);
    else if (full == "grid.nx") int_of(c.nx);
    else if (full == "grid.ny") int_of(c.ny);
    else if (full == "grid.y_max") num_of(c.y_max);
    else if (full == "profile.type") str_of(c.profile_type);
    else if (full == "profile.center") num_of(c.profile_center);
    else if (full == "profile.width") num_of(c.profile_width);
    else if (full == "profile.file") str_of(c.profile_file);
    else if (full == "outflow.family") str_of(c.outflow_family);
    else if (full == "outflow.theta") num_of(c.of_theta);
    else if (full == "outflow.h") num_of(c.of_h);
    else if (full == "outflow.theta_star") num_of(c.of_theta_star);
    else if (full == "outflow.p") num_of(c.of_p);
    else if (full == "outflow.p_bar") num_of(c.of_p_bar);
    else if (full == "outflow.delta_h") num_of(c.of_delta_h);
    else if (full == "outflow.delta_theta") num_of(c.of_delta_theta);
    else if (full == "outflow.delta_theta_star") num_of(c.of_delta_theta_star);
    else if (full == "outflow.delta_p") num_of(c.of_delta_p);
    else if (full == "outflow.delta_ts_t") num_of(c.of_delta_ts_t);
    else if (full == "outflow.sigma") num_of(c.of_sigma);
    else if (full == "outflow.g0") num_of(c.of_g0);
    else if (full == "run.epsilon") num_of(c.epsilon);
    else if (full == "run.t_end") num_of(c.t_end);
    else if (full == "run.max_steps") int_of(c.max_steps);
    else if (full == "run.cfl") num_of(c.cfl);
    else if (full == "run.seed") int_of(c.seed);
    else if (full == "run.thresholds") {
      if (val.size() >= 2 && val.front() == '[' && val.back() == ']') {
        const std::string body = val.substr(1, val.size() - 2);
        const auto comma = body.find(',');
        double lo, hi;
        if (comma != std::string::npos &&
            detail::parse_number(detail::trim(body.substr(0, comma)), lo) &&
            detail::parse_number(detail::trim(body.substr(comma + 1)), hi)) {
          c.threshold_lo = lo;
          c.threshold_hi = hi;
        } else {
          res.errors.push_back({lineno, "run.thresholds: expected [lo, hi]"});
        }
      } else {
        res.errors.push_back({lineno, "run.thresholds: expected [lo, hi]"});
      }
    } else if (full == "output.directory") str_of(c.output_directory);
    else if (full == "output.snapshot_cadence") int_of(c.snapshot_cadence);
    else res.errors.push_back({lineno, "unknown key \"" + full + "\""});
  }

  for (const std::string& msg : validate_config(c)) res.errors.push_back({0, msg});

  if (c.regime == "isentropic") {
    if (seen.count("model.r"))
      res.warnings.push_back("model.r is ignored in the isentropic regime");
    for (const auto& k : seen)
      if (k.rfind("outflow.", 0) == 0) {
        res.warnings.push_back("[outflow] settings are ignored in the isentropic regime");
        break;
      }
  }
  res.ok = res.errors.empty();
  return res;
}

inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  o << "[model]\n";
  o << "regime = \"" << c.regime << "\"\n";
  o << "gamma = " << num(c.gamma) << "\n";
  o << "r = " << num(c.r_gas) << "\n";
  o << "m_weight = " << num(c.m_weight) << "\n";
  o << "\n[grid]\n";
  o << "nx = " << c.nx << "\n";
  o << "ny = " << c.ny << "\n";
  o << "y_max = " << num(c.y_max) << "\n";
  o << "\n[profile]\n";
  o << "type = \"" << c.profile_type << "\"\n";
  o << "center = " << num(c.profile_center) << "\n";
  o << "width = " << num(c.profile_width) << "\n";
  if (!c.profile_file.empty()) o << "file = \"" << c.profile_file << "\"\n";
  o << "\n[outflow]\n";
  o << "family = \"" << c.outflow_family << "\"\n";
  o << "theta = " << num(c.of_theta) << "\n";
  o << "h = " << num(c.of_h) << "\n";
  o << "theta_star = " << num(c.of_theta_star) << "\n";
  o << "p = " << num(c.of_p) << "\n";
  o << "p_bar = " << num(c.of_p_bar) << "\n";
  o << "delta_h = " << num(c.of_delta_h) << "\n";
  o << "delta_theta = " << num(c.of_delta_theta) << "\n";
  o << "delta_theta_star = " << num(c.of_delta_theta_star) << "\n";
  o << "delta_p = " << num(c.of_delta_p) << "\n";
  o << "delta_ts_t = " << num(c.of_delta_ts_t) << "\n";
  o << "sigma = " << num(c.of_sigma) << "\n";
  o << "g0 = " << num(c.of_g0) << "\n";
  o << "\n[run]\n";
  o << "epsilon = " << num(c.epsilon) << "\n";
  o << "t_end = " << num(c.t_end) << "\n";
  o << "max_steps = " << c.max_steps << "\n";
  o << "cfl = " << num(c.cfl) << "\n";
  o << "thresholds = [" << num(c.threshold_lo) << ", " << num(c.threshold_hi) << "]\n";
  o << "seed = " << c.seed << "\n";
  o << "\n[output]\n";
  o << "directory = \"" << c.output_directory << "\"\n";
  o << "snapshot_cadence = " << c.snapshot_cadence << "\n";
  return o.str();
}

}  // namespace mhdbl
