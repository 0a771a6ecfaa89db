#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhdbl/config.hpp"
#include "mhdbl/energy.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

inline constexpr const char* kVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(serialize_config(c))); }

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> field_names(Regime r) {
  if (r == Regime::Isentropic) return {"u", "h_tilde"};
  return {"u", "theta_tilde", "q_tilde"};
}

// Append-only per-step energy log.
class EnergyLogWriter {
 public:
  EnergyLogWriter(const std::string& path, const std::string& cfg_hash) : out_(path) {
    if (!out_) throw construction_error("cannot open energy log for writing: " + path);
    out_ << "# mhdbl version=" << kVersion << " config_hash=" << cfg_hash << "\n";
    out_ << "t,E,D,breach4,breach8,warmup,dt,min_h_or_q\n";
    out_.flush();
  }
  void append(const EnergyRow& r) {
    out_ << fmt17(r.t) << ',' << fmt17(r.E) << ',' << fmt17(r.D) << ',' << (r.breach4 ? 1 : 0)
         << ',' << (r.breach8 ? 1 : 0) << ',' << (r.warmup ? 1 : 0) << ',' << fmt17(r.dt) << ','
         << fmt17(r.min_h_or_q) << "\n";
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

inline void write_energy_csv(const std::string& path, const std::vector<EnergyRow>& rows,
                             const std::string& cfg_hash) {
  EnergyLogWriter w(path, cfg_hash);
  for (const auto& r : rows) w.append(r);
  w.flush();
}

// Self-describing snapshot: grid metadata plus per-field arrays in
// column-major (x-major, y-fastest) order.
inline void write_snapshot_json(const std::string& path, const State& s,
                                const std::string& cfg_hash) {
  nlohmann::json j;
  j["meta"] = {{"version", kVersion},
               {"config_hash", cfg_hash},
               {"regime", regime_name(s.regime)},
               {"t", s.time},
               {"nx", s.grid.nx},
               {"ny", s.grid.ny},
               {"y_max", s.grid.y_max},
               {"dx", s.grid.dx()},
               {"dy", s.grid.dy()},
               {"ordering", "x-major, y fastest"}};
  const auto names = field_names(s.regime);
  for (size_t c = 0; c < names.size(); ++c) j["fields"][names[c]] = s.fields[c].data;
  std::ofstream out(path);
  if (!out) throw construction_error("cannot open snapshot for writing: " + path);
  out << j.dump() << "\n";
}

struct SnapshotData {
  Regime regime = Regime::Isentropic;
  GridSpec grid;
  double t = 0.0;
  std::vector<Field> fields;
};

inline SnapshotData load_snapshot_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw construction_error("cannot open snapshot: " + path);
  nlohmann::json j;
  in >> j;
  SnapshotData d;
  const std::string reg = j.at("meta").at("regime").get<std::string>();
  d.regime = reg == "isentropic" ? Regime::Isentropic : Regime::NonIsentropic;
  d.grid.nx = j.at("meta").at("nx").get<int>();
  d.grid.ny = j.at("meta").at("ny").get<int>();
  d.grid.y_max = j.at("meta").at("y_max").get<double>();
  d.t = j.at("meta").at("t").get<double>();
  for (const std::string& name : field_names(d.regime)) {
    Field f(d.grid);
    const auto& arr = j.at("fields").at(name);
    if (arr.size() != f.data.size())
      throw construction_error("snapshot field size mismatch for " + name);
    for (size_t i = 0; i < f.data.size(); ++i) f.data[i] = arr[i].get<double>();
    d.fields.push_back(std::move(f));
  }
  return d;
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw construction_error("cannot create output directory " + dir + ": " + ec.message());
}

// Plot-ready CSV of the E(t), D(t) curves.
inline void write_energy_plot_csv(const std::string& path, const std::vector<EnergyRow>& rows,
                                  const std::string& cfg_hash) {
  std::ofstream out(path);
  if (!out) throw construction_error("cannot open plot file: " + path);
  out << "# mhdbl version=" << kVersion << " config_hash=" << cfg_hash << "\n";
  out << "t,E,D\n";
  for (const auto& r : rows) out << fmt17(r.t) << ',' << fmt17(r.E) << ',' << fmt17(r.D) << "\n";
}

}  // namespace mhdbl
