#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "paramp/constants.hpp"
#include "paramp/errors.hpp"
#include "paramp/model.hpp"

// JSON configuration layer. Files carry lab units: frequencies, rates
// and energies (as E/h) in GHz, capacitance in fF, inductance in pH,
// current in uA, power in dBm, phase in rad, impedance in ohm. The
// loader is strict: unknown keys are rejected with their full path.

namespace paramp {

using Json = nlohmann::ordered_json;

struct JunctionConfig {
  std::optional<double> e_j;   // GHz
  std::optional<double> e_c;   // GHz
  std::optional<double> l_j0;  // pH
  std::optional<double> c_j;   // fF
  bool operator==(const JunctionConfig&) const = default;
};

struct SingleJunctionConfig {
  JunctionConfig junction;
  bool operator==(const SingleJunctionConfig&) const = default;
};

struct SeriesArrayConfig {
  long n = 1;
  JunctionConfig junction;
  double c_ground = 0.0;  // fF
  double c_out = 0.0;     // fF
  bool operator==(const SeriesArrayConfig&) const = default;
};

struct BlochniumConfig {
  long n_quartons = 1;
  long m_slaves = 1;
  double alpha_c = 0.0;
  JunctionConfig slave_junction;
  double c_ground = 0.0;  // fF
  bool operator==(const BlochniumConfig&) const = default;
};

struct ModifiedBjpaConfig {
  long n_cells = 1;
  double c_g = 0.0, c_j = 0.0, c_m = 0.0;    // fF
  double c_1 = 0.0, c_2 = 0.0, c_s = 0.0;    // fF
  double l_js = 0.0, l_jm = 0.0, l_s = 0.0;  // pH
  std::optional<double> e_js;  // GHz; derived from l_js when absent
  std::optional<double> e_jm;  // GHz; derived from l_jm when absent
  long n_primary = 1;
  bool operator==(const ModifiedBjpaConfig&) const = default;
};

struct ArchitectureConfig {
  std::variant<SingleJunctionConfig, SeriesArrayConfig, BlochniumConfig,
               ModifiedBjpaConfig>
      kind;
  bool operator==(const ArchitectureConfig&) const = default;
};

struct CouplingConfig {
  std::optional<double> kappa;  // GHz
  std::optional<double> q_eff;  // dimensionless
  bool operator==(const CouplingConfig&) const = default;
};

struct EnvironmentConfig {
  CouplingConfig coupling;
  double z_line = 50.0;  // ohm
  bool operator==(const EnvironmentConfig&) const = default;
};

struct StrengthConfig {
  std::optional<double> zeta;      // normalized
  std::optional<double> flux;      // photons/s
  std::optional<double> dbm;       // dBm
  std::optional<double> microamp;  // uA
  std::optional<double> eta;       // with microamp only
  bool operator==(const StrengthConfig&) const = default;
};

struct DriveConfig {
  double pump_freq = 0.0;   // GHz
  double pump_phase = 0.0;  // rad
  StrengthConfig strength;
  bool operator==(const DriveConfig&) const = default;
};

struct ProbeConfig {
  std::optional<double> signal_freq;  // GHz
  std::optional<double> delta;        // normalized
  double signal_power_dbm = -150.0;
  bool operator==(const ProbeConfig&) const = default;
};

struct SweepAxis {
  std::string path;  // dotted, e.g. drive.strength.zeta
  std::vector<double> values;
  bool operator==(const SweepAxis&) const = default;
};

enum class SweepMode { Cartesian, Zipped };

struct SweepOutputs {
  std::string directory = "sweep_out";
  std::vector<std::string> formats = {"csv"};
  bool operator==(const SweepOutputs&) const = default;
};

struct SweepConfig {
  std::vector<SweepAxis> axes;
  SweepMode mode = SweepMode::Cartesian;
  SweepOutputs outputs;
  bool operator==(const SweepConfig&) const = default;
};

struct ConfigData {
  ArchitectureConfig architecture;
  EnvironmentConfig environment;
  std::optional<DriveConfig> drive;
  std::optional<ProbeConfig> probe;
  std::optional<SweepConfig> sweep;
  bool operator==(const ConfigData&) const = default;
};

namespace config_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw config_error("config: " + (path.empty() ? "<root>" : path) + ": " +
                     msg);
}

inline const Json& expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

inline void check_keys(const Json& obj, const std::string& path,
                       const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      fail(path, "unknown key \"" + item.key() + "\"");
}

inline double get_number(const Json& obj, const std::string& path,
                         const char* key) {
  if (!obj.contains(key)) fail(path, std::string("missing key \"") + key + "\"");
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

inline double get_number_or(const Json& obj, const std::string& path,
                            const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::optional<double> get_opt_number(const Json& obj,
                                            const std::string& path,
                                            const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

inline long get_integer(const Json& obj, const std::string& path,
                        const char* key) {
  if (!obj.contains(key)) fail(path, std::string("missing key \"") + key + "\"");
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long>();
}

inline long get_integer_or(const Json& obj, const std::string& path,
                           const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long>();
}

inline std::string get_string(const Json& obj, const std::string& path,
                              const char* key) {
  if (!obj.contains(key)) fail(path, std::string("missing key \"") + key + "\"");
  const Json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline JunctionConfig parse_junction(const Json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"e_j", "e_c", "l_j0", "c_j"});
  JunctionConfig out;
  out.e_j = get_opt_number(j, path, "e_j");
  out.e_c = get_opt_number(j, path, "e_c");
  out.l_j0 = get_opt_number(j, path, "l_j0");
  out.c_j = get_opt_number(j, path, "c_j");
  if (!out.e_j && !out.l_j0)
    fail(path, "junction needs e_j (GHz) or l_j0 (pH)");
  if (!out.e_c && !out.c_j) fail(path, "junction needs e_c (GHz) or c_j (fF)");
  return out;
}

inline Json dump_junction(const JunctionConfig& j) {
  Json out = Json::object();
  if (j.e_j) out["e_j"] = *j.e_j;
  if (j.e_c) out["e_c"] = *j.e_c;
  if (j.l_j0) out["l_j0"] = *j.l_j0;
  if (j.c_j) out["c_j"] = *j.c_j;
  return out;
}

inline ArchitectureConfig parse_architecture(const Json& j,
                                             const std::string& path) {
  expect_object(j, path);
  const std::string type = get_string(j, path, "type");
  ArchitectureConfig out;
  if (type == "single_jj") {
    check_keys(j, path, {"type", "junction"});
    SingleJunctionConfig a;
    if (!j.contains("junction")) fail(path, "missing key \"junction\"");
    a.junction = parse_junction(j.at("junction"), path + ".junction");
    out.kind = a;
  } else if (type == "series_array") {
    check_keys(j, path, {"type", "n", "junction", "c_ground", "c_out"});
    SeriesArrayConfig a;
    a.n = get_integer(j, path, "n");
    if (!j.contains("junction")) fail(path, "missing key \"junction\"");
    a.junction = parse_junction(j.at("junction"), path + ".junction");
    a.c_ground = get_number(j, path, "c_ground");
    a.c_out = get_number(j, path, "c_out");
    out.kind = a;
  } else if (type == "blochnium") {
    check_keys(j, path, {"type", "n_quartons", "m_slaves", "alpha_c",
                         "slave_junction", "c_ground"});
    BlochniumConfig a;
    a.n_quartons = get_integer(j, path, "n_quartons");
    a.m_slaves = get_integer(j, path, "m_slaves");
    a.alpha_c = get_number(j, path, "alpha_c");
    if (!j.contains("slave_junction"))
      fail(path, "missing key \"slave_junction\"");
    a.slave_junction =
        parse_junction(j.at("slave_junction"), path + ".slave_junction");
    a.c_ground = get_number(j, path, "c_ground");
    out.kind = a;
  } else if (type == "modified_bjpa") {
    check_keys(j, path,
               {"type", "n_cells", "c_g", "c_j", "c_m", "c_1", "c_2", "c_s",
                "l_js", "l_jm", "l_s", "e_js", "e_jm", "n_primary"});
    ModifiedBjpaConfig a;
    a.n_cells = get_integer_or(j, path, "n_cells", 1);
    a.c_g = get_number(j, path, "c_g");
    a.c_j = get_number(j, path, "c_j");
    a.c_m = get_number(j, path, "c_m");
    a.c_1 = get_number(j, path, "c_1");
    a.c_2 = get_number(j, path, "c_2");
    a.c_s = get_number(j, path, "c_s");
    a.l_js = get_number(j, path, "l_js");
    a.l_jm = get_number(j, path, "l_jm");
    a.l_s = get_number(j, path, "l_s");
    a.e_js = get_opt_number(j, path, "e_js");
    a.e_jm = get_opt_number(j, path, "e_jm");
    a.n_primary = get_integer_or(j, path, "n_primary", 1);
    out.kind = a;
  } else {
    fail(path + ".type",
         "unknown architecture \"" + type +
             "\"; expected single_jj, series_array, blochnium, or "
             "modified_bjpa");
  }
  return out;
}

inline Json dump_architecture(const ArchitectureConfig& a) {
  struct V {
    Json operator()(const SingleJunctionConfig& c) const {
      Json j = Json::object();
      j["type"] = "single_jj";
      j["junction"] = dump_junction(c.junction);
      return j;
    }
    Json operator()(const SeriesArrayConfig& c) const {
      Json j = Json::object();
      j["type"] = "series_array";
      j["n"] = c.n;
      j["junction"] = dump_junction(c.junction);
      j["c_ground"] = c.c_ground;
      j["c_out"] = c.c_out;
      return j;
    }
    Json operator()(const BlochniumConfig& c) const {
      Json j = Json::object();
      j["type"] = "blochnium";
      j["n_quartons"] = c.n_quartons;
      j["m_slaves"] = c.m_slaves;
      j["alpha_c"] = c.alpha_c;
      j["slave_junction"] = dump_junction(c.slave_junction);
      j["c_ground"] = c.c_ground;
      return j;
    }
    Json operator()(const ModifiedBjpaConfig& c) const {
      Json j = Json::object();
      j["type"] = "modified_bjpa";
      j["n_cells"] = c.n_cells;
      j["c_g"] = c.c_g;
      j["c_j"] = c.c_j;
      j["c_m"] = c.c_m;
      j["c_1"] = c.c_1;
      j["c_2"] = c.c_2;
      j["c_s"] = c.c_s;
      j["l_js"] = c.l_js;
      j["l_jm"] = c.l_jm;
      j["l_s"] = c.l_s;
      if (c.e_js) j["e_js"] = *c.e_js;
      if (c.e_jm) j["e_jm"] = *c.e_jm;
      j["n_primary"] = c.n_primary;
      return j;
    }
  };
  return std::visit(V{}, a.kind);
}

inline EnvironmentConfig parse_environment(const Json& j,
                                           const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"coupling", "z_line"});
  if (!j.contains("coupling")) fail(path, "missing key \"coupling\"");
  const Json& c = expect_object(j.at("coupling"), path + ".coupling");
  check_keys(c, path + ".coupling", {"kappa", "q_eff"});
  EnvironmentConfig out;
  out.coupling.kappa = get_opt_number(c, path + ".coupling", "kappa");
  out.coupling.q_eff = get_opt_number(c, path + ".coupling", "q_eff");
  if (out.coupling.kappa.has_value() == out.coupling.q_eff.has_value())
    fail(path + ".coupling",
         "exactly one of kappa (GHz) or q_eff must be given");
  out.z_line = get_number_or(j, path, "z_line", 50.0);
  return out;
}

inline Json dump_environment(const EnvironmentConfig& e) {
  Json j = Json::object();
  Json c = Json::object();
  if (e.coupling.kappa) c["kappa"] = *e.coupling.kappa;
  if (e.coupling.q_eff) c["q_eff"] = *e.coupling.q_eff;
  j["coupling"] = c;
  j["z_line"] = e.z_line;
  return j;
}

inline DriveConfig parse_drive(const Json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"pump_freq", "pump_phase", "strength"});
  DriveConfig out;
  out.pump_freq = get_number(j, path, "pump_freq");
  out.pump_phase = get_number_or(j, path, "pump_phase", 0.0);
  if (!j.contains("strength")) fail(path, "missing key \"strength\"");
  const Json& s = expect_object(j.at("strength"), path + ".strength");
  check_keys(s, path + ".strength", {"zeta", "flux", "dbm", "microamp", "eta"});
  out.strength.zeta = get_opt_number(s, path + ".strength", "zeta");
  out.strength.flux = get_opt_number(s, path + ".strength", "flux");
  out.strength.dbm = get_opt_number(s, path + ".strength", "dbm");
  out.strength.microamp = get_opt_number(s, path + ".strength", "microamp");
  out.strength.eta = get_opt_number(s, path + ".strength", "eta");
  const int given = int(out.strength.zeta.has_value()) +
                    int(out.strength.flux.has_value()) +
                    int(out.strength.dbm.has_value()) +
                    int(out.strength.microamp.has_value());
  if (given != 1)
    fail(path + ".strength",
         "exactly one of zeta, flux, dbm, or microamp must be given");
  if (out.strength.eta && !out.strength.microamp)
    fail(path + ".strength", "eta is only meaningful with microamp");
  return out;
}

inline Json dump_drive(const DriveConfig& d) {
  Json j = Json::object();
  j["pump_freq"] = d.pump_freq;
  j["pump_phase"] = d.pump_phase;
  Json s = Json::object();
  if (d.strength.zeta) s["zeta"] = *d.strength.zeta;
  if (d.strength.flux) s["flux"] = *d.strength.flux;
  if (d.strength.dbm) s["dbm"] = *d.strength.dbm;
  if (d.strength.microamp) s["microamp"] = *d.strength.microamp;
  if (d.strength.eta) s["eta"] = *d.strength.eta;
  j["strength"] = s;
  return j;
}

inline ProbeConfig parse_probe(const Json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"signal_freq", "delta", "signal_power_dbm"});
  ProbeConfig out;
  out.signal_freq = get_opt_number(j, path, "signal_freq");
  out.delta = get_opt_number(j, path, "delta");
  out.signal_power_dbm = get_number_or(j, path, "signal_power_dbm", -150.0);
  if (out.signal_freq && out.delta)
    fail(path, "give signal_freq (GHz) or delta, not both");
  return out;
}

inline Json dump_probe(const ProbeConfig& p) {
  Json j = Json::object();
  if (p.signal_freq) j["signal_freq"] = *p.signal_freq;
  if (p.delta) j["delta"] = *p.delta;
  j["signal_power_dbm"] = p.signal_power_dbm;
  return j;
}

inline SweepConfig parse_sweep(const Json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"axes", "mode", "outputs"});
  SweepConfig out;
  if (!j.contains("axes")) fail(path, "missing key \"axes\"");
  const Json& axes = j.at("axes");
  if (!axes.is_array() || axes.empty())
    fail(path + ".axes", "expected a nonempty array");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string apath = path + ".axes[" + std::to_string(i) + "]";
    const Json& a = expect_object(axes.at(i), apath);
    check_keys(a, apath, {"path", "values"});
    SweepAxis axis;
    axis.path = get_string(a, apath, "path");
    if (!a.contains("values")) fail(apath, "missing key \"values\"");
    const Json& vals = a.at("values");
    if (!vals.is_array() || vals.empty())
      fail(apath + ".values", "expected a nonempty array of numbers");
    for (const auto& v : vals) {
      if (!v.is_number()) fail(apath + ".values", "expected numbers only");
      axis.values.push_back(v.get<double>());
    }
    out.axes.push_back(std::move(axis));
  }
  if (j.contains("mode")) {
    const std::string mode = get_string(j, path, "mode");
    if (mode == "cartesian")
      out.mode = SweepMode::Cartesian;
    else if (mode == "zipped")
      out.mode = SweepMode::Zipped;
    else
      fail(path + ".mode", "expected \"cartesian\" or \"zipped\"");
  }
  if (j.contains("outputs")) {
    const Json& o = expect_object(j.at("outputs"), path + ".outputs");
    check_keys(o, path + ".outputs", {"directory", "formats"});
    if (o.contains("directory"))
      out.outputs.directory = get_string(o, path + ".outputs", "directory");
    if (o.contains("formats")) {
      const Json& f = o.at("formats");
      if (!f.is_array() || f.empty())
        fail(path + ".outputs.formats", "expected a nonempty array");
      out.outputs.formats.clear();
      for (const auto& v : f) {
        if (!v.is_string())
          fail(path + ".outputs.formats", "expected strings only");
        const std::string s = v.get<std::string>();
        if (s != "csv" && s != "json" && s != "plot")
          fail(path + ".outputs.formats",
               "unknown format \"" + s + "\"; expected csv, json, or plot");
        out.outputs.formats.push_back(s);
      }
    }
  }
  if (out.mode == SweepMode::Zipped)
    for (const auto& a : out.axes)
      if (a.values.size() != out.axes.front().values.size())
        fail(path, "zipped axes must have equal value counts");
  return out;
}

inline Json dump_sweep(const SweepConfig& s) {
  Json j = Json::object();
  Json axes = Json::array();
  for (const auto& a : s.axes) {
    Json aj = Json::object();
    aj["path"] = a.path;
    aj["values"] = a.values;
    axes.push_back(aj);
  }
  j["axes"] = axes;
  j["mode"] = s.mode == SweepMode::Cartesian ? "cartesian" : "zipped";
  Json o = Json::object();
  o["directory"] = s.outputs.directory;
  o["formats"] = s.outputs.formats;
  j["outputs"] = o;
  return j;
}

}  // namespace config_detail

inline ConfigData parse_config(const Json& j) {
  using namespace config_detail;
  expect_object(j, "");
  check_keys(j, "", {"architecture", "environment", "drive", "probe", "sweep"});
  ConfigData out;
  if (!j.contains("architecture")) fail("", "missing key \"architecture\"");
  out.architecture = parse_architecture(j.at("architecture"), "architecture");
  if (!j.contains("environment")) fail("", "missing key \"environment\"");
  out.environment = parse_environment(j.at("environment"), "environment");
  if (j.contains("drive")) out.drive = parse_drive(j.at("drive"), "drive");
  if (j.contains("probe")) out.probe = parse_probe(j.at("probe"), "probe");
  if (j.contains("sweep")) out.sweep = parse_sweep(j.at("sweep"), "sweep");
  return out;
}

inline Json serialize_config(const ConfigData& c) {
  using namespace config_detail;
  Json j = Json::object();
  j["architecture"] = dump_architecture(c.architecture);
  j["environment"] = dump_environment(c.environment);
  if (c.drive) j["drive"] = dump_drive(*c.drive);
  if (c.probe) j["probe"] = dump_probe(*c.probe);
  if (c.sweep) j["sweep"] = dump_sweep(*c.sweep);
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw config_error("config " + path + ": " + e.what());
  }
}

inline ConfigData load_config(const std::string& path) {
  return parse_config(load_json_file(path));
}

// Dotted-path patch for sweeps; the full path must already exist and
// point at a number so a sweep can never invent new fields.
inline void set_config_value(Json& doc, const std::string& dotted_path,
                             double value) {
  Json* node = &doc;
  std::string::size_type start = 0;
  std::vector<std::string> parts;
  while (true) {
    const auto dot = dotted_path.find('.', start);
    parts.push_back(dotted_path.substr(
        start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  std::string walked;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& key = parts[i];
    if (key.empty())
      throw config_error("sweep path \"" + dotted_path +
                         "\" has an empty component");
    if (!node->is_object() || !node->contains(key))
      throw config_error("sweep path \"" + dotted_path +
                         "\" does not resolve: no field \"" + key + "\"" +
                         (walked.empty() ? "" : " under " + walked));
    walked = walked.empty() ? key : walked + "." + key;
    node = &node->at(key);
  }
  if (!node->is_number())
    throw config_error("sweep path \"" + dotted_path +
                       "\" points at a non-numeric field");
  *node = value;
}

// Lab units to internal angular-frequency units.

namespace config_detail {

inline JunctionSpec to_junction(const JunctionConfig& j) {
  JunctionSpec out;
  out.e_j = j.e_j ? ghz_to_rad(*j.e_j)
                  : josephson_energy_from_inductance(*j.l_j0 * 1e-12);
  out.e_c = j.e_c ? ghz_to_rad(*j.e_c)
                  : charging_energy_from_capacitance(*j.c_j * 1e-15);
  if (j.l_j0) out.l_j0 = *j.l_j0 * 1e-12;
  if (j.c_j) out.c_j = *j.c_j * 1e-15;
  return out;
}

}  // namespace config_detail

inline Architecture to_architecture(const ArchitectureConfig& c) {
  using namespace config_detail;
  struct V {
    Architecture operator()(const SingleJunctionConfig& a) const {
      return SingleJunction{to_junction(a.junction)};
    }
    Architecture operator()(const SeriesArrayConfig& a) const {
      SeriesArray out;
      out.n = a.n;
      out.junction = to_junction(a.junction);
      out.c_ground = a.c_ground * 1e-15;
      out.c_out = a.c_out * 1e-15;
      return out;
    }
    Architecture operator()(const BlochniumConfig& a) const {
      Blochnium out;
      out.n_quartons = a.n_quartons;
      out.m_slaves = a.m_slaves;
      out.alpha_c = a.alpha_c;
      out.slave_junction = to_junction(a.slave_junction);
      out.c_ground = a.c_ground * 1e-15;
      return out;
    }
    Architecture operator()(const ModifiedBjpaConfig& a) const {
      ModifiedBjpa out;
      out.n_cells = a.n_cells;
      out.c_g = a.c_g * 1e-15;
      out.c_j = a.c_j * 1e-15;
      out.c_m = a.c_m * 1e-15;
      out.c_1 = a.c_1 * 1e-15;
      out.c_2 = a.c_2 * 1e-15;
      out.c_s = a.c_s * 1e-15;
      out.l_js = a.l_js * 1e-12;
      out.l_jm = a.l_jm * 1e-12;
      out.l_s = a.l_s * 1e-12;
      out.e_js = a.e_js ? ghz_to_rad(*a.e_js)
                        : josephson_energy_from_inductance(a.l_js * 1e-12);
      out.e_jm = a.e_jm ? ghz_to_rad(*a.e_jm)
                        : josephson_energy_from_inductance(a.l_jm * 1e-12);
      out.n_primary = a.n_primary;
      return out;
    }
  };
  return std::visit(V{}, c.kind);
}

inline Environment to_environment(const EnvironmentConfig& c) {
  Environment out;
  if (c.coupling.kappa)
    out.coupling = DirectKappa{ghz_to_rad(*c.coupling.kappa)};
  else
    out.coupling = QualityFactor{*c.coupling.q_eff};
  out.z_line = c.z_line;
  return out;
}

inline Drive to_drive(const DriveConfig& c) {
  Drive out;
  out.pump_freq = ghz_to_rad(c.pump_freq);
  out.pump_phase = c.pump_phase;
  if (c.strength.zeta)
    out.strength = NormalizedZeta{*c.strength.zeta};
  else if (c.strength.flux)
    out.strength = PhotonFlux{*c.strength.flux};
  else if (c.strength.dbm)
    out.strength = PowerDbm{*c.strength.dbm};
  else
    out.strength = CurrentMicroamp{*c.strength.microamp, c.strength.eta};
  return out;
}

inline Probe to_probe(const ProbeConfig& c) {
  Probe out;
  if (c.signal_freq) out.signal_freq = ghz_to_rad(*c.signal_freq);
  out.delta = c.delta;
  out.signal_power_dbm = c.signal_power_dbm;
  return out;
}

}  // namespace paramp
