#include <atomic>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "paramp/paramp.hpp"

namespace fs = std::filesystem;
using paramp::Json;

namespace {

double parse_freq_ghz(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  double scale = 1.0;
  auto ends_with = [&](const char* suffix) {
    const std::size_t n = std::strlen(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
  };
  if (ends_with("ghz")) {
    s.resize(s.size() - 3);
  } else if (ends_with("mhz")) {
    scale = 1e-3;
    s.resize(s.size() - 3);
  } else if (ends_with("khz")) {
    scale = 1e-6;
    s.resize(s.size() - 3);
  } else if (ends_with("hz")) {
    scale = 1e-9;
    s.resize(s.size() - 2);
  }
  std::size_t used = 0;
  const double value = std::stod(s, &used);
  if (used != s.size())
    throw paramp::config_error("cannot parse frequency \"" + text + "\"");
  return value * scale;
}

paramp::BranchPolicy parse_branch(const std::string& name) {
  if (name == "low") return paramp::BranchPolicy::LowBranch;
  if (name == "high") return paramp::BranchPolicy::HighBranch;
  if (name == "error") return paramp::BranchPolicy::Error;
  throw paramp::config_error("unknown branch policy \"" + name +
                             "\"; expected low, high, or error");
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  bool out_given = false;
  std::string format = "csv";
  bool plot = false;
  int threads = 0;
  long seed = 0;  // reserved; every computation is deterministic
};

int effective_threads(const CommonOpts& c) {
  if (c.threads > 0) return c.threads;
  if (const char* env = std::getenv("PARAMP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config_path,
                              "configuration file (JSON)");
  if (needs_config) opt->required();
  cmd->add_option("--out", c.out_dir, "output directory")
      ->each([&c](const std::string&) { c.out_given = true; });
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--plot", c.plot, "also write an SVG plot");
  cmd->add_option("--threads", c.threads, "worker threads (default 1)");
  cmd->add_option("--seed", c.seed, "reserved; computations are deterministic");
}

fs::path prepare_out(const CommonOpts& c) {
  fs::path dir(c.out_dir);
  if (!dir.empty() && dir != ".") fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw paramp::config_error("cannot open output file: " + path.string());
  out << text;
  if (!out)
    throw paramp::config_error("failed writing output file: " + path.string());
}

Json json_banner() {
  Json j = Json::object();
  j["tool"] = std::string("paramp-lab v") + paramp::version_string;
  j["schema"] = paramp::output_schema_version;
  return j;
}

Json curve_to_json(const paramp::GainCurve& curve) {
  Json rows = Json::array();
  for (const auto& p : curve.points) {
    Json r = Json::object();
    r[curve.x_label.empty() ? "x" : curve.x_label] = p.x;
    r["signal_gain_db"] = p.signal_gain_db;
    r["idler_gain_db"] = p.idler_gain_db;
    rows.push_back(r);
  }
  return rows;
}

paramp::CsvTable curve_to_csv(const paramp::GainCurve& curve) {
  paramp::CsvTable t;
  t.header = {curve.x_label.empty() ? "x" : curve.x_label, "signal_gain_db",
              "idler_gain_db"};
  for (const auto& p : curve.points)
    t.rows.push_back({p.x, p.signal_gain_db, p.idler_gain_db});
  return t;
}

paramp::PlotSpec curve_to_plot(const paramp::GainCurve& curve,
                               const std::string& title) {
  paramp::PlotSpec spec;
  spec.title = title;
  spec.x_label = curve.x_label.empty() ? "x" : curve.x_label;
  spec.y_label = "gain (dB)";
  for (const auto& mc : curve.mode_curves) {
    paramp::PlotSeries s;
    s.label = "mode " + std::to_string(mc.mode_index);
    for (const auto& p : mc.points) {
      s.x.push_back(p.x);
      s.y.push_back(p.signal_gain_db);
    }
    spec.series.push_back(std::move(s));
  }
  paramp::PlotSeries env;
  env.label = curve.mode_curves.empty() ? "signal gain" : "envelope";
  for (const auto& p : curve.points) {
    env.x.push_back(p.x);
    env.y.push_back(p.signal_gain_db);
  }
  spec.series.push_back(std::move(env));
  return spec;
}

struct GainAxis {
  bool frequency = false;
  double from = -3.0;
  double to = 3.0;
  long points = 401;
};

paramp::GainCurve compute_gain_curve(const paramp::ResolvedSystem& sys,
                                     const GainAxis& axis,
                                     paramp::BranchPolicy policy) {
  if (axis.frequency) {
    if (std::holds_alternative<paramp::ModifiedBjpa>(sys.arch))
      return paramp::comb_spectrum(sys, axis.from, axis.to, axis.points);
    const paramp::PumpOperatingPoint op = paramp::operating_point(sys, policy);
    return paramp::gain_vs_frequency(sys, op, axis.from, axis.to, axis.points);
  }
  const paramp::PumpOperatingPoint op = paramp::operating_point(sys, policy);
  paramp::GainCurve curve =
      paramp::gain_spectrum(op, axis.from, axis.to, axis.points);
  curve.architecture = paramp::architecture_name(sys.arch);
  return curve;
}

int run_modes(const CommonOpts& common, const std::string& method_name) {
  const paramp::ConfigData config = paramp::load_config(common.config_path);
  paramp::EigenMethod method = paramp::EigenMethod::Auto;
  if (method_name == "dense") method = paramp::EigenMethod::Dense;
  if (method_name == "banded") method = paramp::EigenMethod::Banded;
  const paramp::ResolvedSystem sys = paramp::resolve(config, method);

  paramp::CsvTable table;
  table.header = {"mode_index", "freq_ghz", "c_eff_fF", "l_eff_pH",
                  "z_eff_ohm"};
  table.comments.push_back(
      "architecture " + paramp::architecture_name(sys.arch) + ", " +
      std::to_string(sys.matrices.node_count) + " nodes, " +
      std::to_string(sys.modes.zero_modes.size()) + " zero modes excluded");
  Json jmodes = Json::array();
  for (long i = 0; i < sys.modes.count(); ++i) {
    if (sys.modes.is_zero_mode(i)) continue;
    const paramp::EffectiveOscillator osc =
        paramp::effective_params(sys.modes, sys.matrices, i, sys.env);
    const double f_ghz = paramp::rad_to_ghz(osc.omega_eff);
    table.rows.push_back({static_cast<long>(i), f_ghz, osc.c_eff / 1e-15,
                          osc.l_eff / 1e-12, osc.z_eff});
    Json m = Json::object();
    m["mode_index"] = i;
    m["freq_ghz"] = f_ghz;
    m["c_eff_fF"] = osc.c_eff / 1e-15;
    m["l_eff_pH"] = osc.l_eff / 1e-12;
    m["z_eff_ohm"] = osc.z_eff;
    jmodes.push_back(m);
  }

  const fs::path dir = prepare_out(common);
  if (common.format == "json") {
    Json doc = json_banner();
    doc["modes"] = jmodes;
    const fs::path path = dir / "modes.json";
    write_text(path, doc.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
  } else {
    const fs::path path = dir / "modes.csv";
    paramp::write_csv(path.string(), table);
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int run_steady_state(const CommonOpts& common, bool have_delta, double delta,
                     bool have_zeta, double zeta, double phase) {
  if (!have_delta != !have_zeta)
    throw paramp::config_error(
        "steady-state needs both --delta and --zeta, or a --config");
  double d = delta, z = zeta, ph = phase;
  if (!have_delta) {
    if (common.config_path.empty())
      throw paramp::config_error(
          "steady-state needs --delta/--zeta or --config");
    const paramp::ConfigData config = paramp::load_config(common.config_path);
    const paramp::ResolvedSystem sys = paramp::resolve(config);
    if (!sys.delta || !sys.zeta)
      throw paramp::config_error(
          "configuration has no drive section to derive delta and zeta");
    d = *sys.delta;
    z = *sys.zeta;
    ph = sys.drive ? sys.drive->pump_phase : 0.0;
  }
  const auto roots = paramp::steady_state(d, z, ph);
  Json doc = json_banner();
  doc["delta"] = d;
  doc["zeta"] = z;
  Json jroots = Json::array();
  for (const auto& r : roots) {
    Json jr = Json::object();
    jr["n"] = r.n;
    jr["phase"] = r.phase;
    jr["stable"] = r.stability == paramp::Stability::Stable;
    jroots.push_back(jr);
  }
  doc["roots"] = jroots;
  doc["bistable"] = roots.size() >= 3;
  std::cout << doc.dump(2) << "\n";
  if (common.out_given) {
    const fs::path path = prepare_out(common) / "steady_state.json";
    write_text(path, doc.dump(2) + "\n");
  }
  return 0;
}

int run_gain(const CommonOpts& common, const GainAxis& axis,
             paramp::BranchPolicy policy, const std::string& base_name) {
  const paramp::ConfigData config = paramp::load_config(common.config_path);
  const paramp::ResolvedSystem sys = paramp::resolve(config);
  const paramp::GainCurve curve = compute_gain_curve(sys, axis, policy);

  const fs::path dir = prepare_out(common);
  if (common.format == "json") {
    Json doc = json_banner();
    doc["architecture"] = curve.architecture;
    doc["x_label"] = curve.x_label;
    doc["points"] = curve_to_json(curve);
    const fs::path path = dir / (base_name + ".json");
    write_text(path, doc.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
  } else {
    const fs::path path = dir / (base_name + ".csv");
    paramp::write_csv(path.string(), curve_to_csv(curve));
    std::cout << "wrote " << path.string() << "\n";
  }
  if (common.plot) {
    const fs::path path = dir / (base_name + ".svg");
    paramp::write_svg(path.string(),
                      curve_to_plot(curve, "gain: " + curve.architecture));
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int run_p1db(const CommonOpts& common, double probe_delta, double p_min,
             double p_max, long points, paramp::BranchPolicy policy) {
  const paramp::ConfigData config = paramp::load_config(common.config_path);
  const paramp::ResolvedSystem sys = paramp::resolve(config);
  double delta_probe = probe_delta;
  if (sys.probe && sys.probe->delta) delta_probe = *sys.probe->delta;
  const paramp::CompressionResult res = paramp::analytic_p1db(
      sys, delta_probe, p_min, p_max, points, policy);

  Json doc = json_banner();
  doc["status"] = res.status == paramp::CompressionStatus::Compressed
                      ? "compressed"
                      : "no_compression_in_range";
  if (res.status == paramp::CompressionStatus::Compressed)
    doc["p1db_dbm"] = res.p1db_dbm;
  doc["reference_gain_db"] = res.reference_gain_db;
  Json curve = Json::array();
  for (const auto& p : res.curve) {
    Json r = Json::object();
    r["signal_power_dbm"] = p.signal_power_dbm;
    r["gain_db"] = p.gain_db;
    curve.push_back(r);
  }
  doc["curve"] = curve;
  std::cout << doc.dump(2) << "\n";
  if (common.out_given) {
    const fs::path path = prepare_out(common) / "p1db.json";
    write_text(path, doc.dump(2) + "\n");
  }
  return 0;
}

int run_sweep(const CommonOpts& common, const GainAxis& axis,
              paramp::BranchPolicy policy) {
  const Json doc = paramp::load_json_file(common.config_path);
  const paramp::ConfigData config = paramp::parse_config(doc);
  if (!config.sweep)
    throw paramp::config_error(
        "sweep subcommand needs a sweep section in the configuration");
  const paramp::SweepConfig& plan = *config.sweep;

  // Expand the grid: cartesian product or zipped rows of axis values.
  std::vector<std::vector<double>> grid;
  if (plan.mode == paramp::SweepMode::Zipped) {
    for (std::size_t i = 0; i < plan.axes.front().values.size(); ++i) {
      std::vector<double> row;
      for (const auto& ax : plan.axes) row.push_back(ax.values[i]);
      grid.push_back(std::move(row));
    }
  } else {
    grid.push_back({});
    for (const auto& ax : plan.axes) {
      std::vector<std::vector<double>> next;
      for (const auto& partial : grid)
        for (double v : ax.values) {
          std::vector<double> row = partial;
          row.push_back(v);
          next.push_back(std::move(row));
        }
      grid = std::move(next);
    }
  }

  const fs::path dir =
      common.out_given ? fs::path(common.out_dir)
                       : fs::path(plan.outputs.directory);
  fs::create_directories(dir);
  const auto& formats = plan.outputs.formats;
  const bool want_csv =
      std::find(formats.begin(), formats.end(), "csv") != formats.end();
  const bool want_json =
      std::find(formats.begin(), formats.end(), "json") != formats.end();
  const bool want_plot =
      common.plot ||
      std::find(formats.begin(), formats.end(), "plot") != formats.end();

  struct PointResult {
    std::string status = "ok";
    std::vector<std::string> files;
  };
  std::vector<PointResult> results(grid.size());

  auto run_point = [&](std::size_t idx) {
    char tag[16];
    std::snprintf(tag, sizeof(tag), "point_%04zu", idx);
    PointResult& pr = results[idx];
    try {
      Json patched = doc;
      for (std::size_t a = 0; a < plan.axes.size(); ++a)
        paramp::set_config_value(patched, plan.axes[a].path, grid[idx][a]);
      const paramp::ConfigData point_config = paramp::parse_config(patched);
      const paramp::ResolvedSystem sys = paramp::resolve(point_config);
      const paramp::GainCurve curve = compute_gain_curve(sys, axis, policy);
      if (want_csv) {
        const fs::path p = dir / (std::string(tag) + ".csv");
        paramp::write_csv(p.string(), curve_to_csv(curve));
        pr.files.push_back(p.filename().string());
      }
      if (want_json) {
        Json jd = json_banner();
        jd["points"] = curve_to_json(curve);
        const fs::path p = dir / (std::string(tag) + ".json");
        write_text(p, jd.dump(2) + "\n");
        pr.files.push_back(p.filename().string());
      }
      if (want_plot) {
        const fs::path p = dir / (std::string(tag) + ".svg");
        paramp::write_svg(p.string(), curve_to_plot(curve, tag));
        pr.files.push_back(p.filename().string());
      }
    } catch (const std::exception& e) {
      pr.status = e.what();
    }
  };

  const int threads = effective_threads(common);
  if (threads <= 1 || grid.size() <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), grid.size());
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < grid.size();
             i = next.fetch_add(1))
          run_point(i);
      });
    for (auto& t : pool) t.join();
  }

  Json manifest = json_banner();
  Json jaxes = Json::array();
  for (const auto& ax : plan.axes) {
    Json ja = Json::object();
    ja["path"] = ax.path;
    ja["values"] = ax.values;
    jaxes.push_back(ja);
  }
  manifest["axes"] = jaxes;
  manifest["mode"] =
      plan.mode == paramp::SweepMode::Cartesian ? "cartesian" : "zipped";
  Json jpoints = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Json jp = Json::object();
    Json values = Json::object();
    for (std::size_t a = 0; a < plan.axes.size(); ++a)
      values[plan.axes[a].path] = grid[i][a];
    jp["values"] = values;
    jp["status"] = results[i].status;
    jp["files"] = results[i].files;
    jpoints.push_back(jp);
  }
  manifest["points"] = jpoints;
  const fs::path mpath = dir / "manifest.json";
  write_text(mpath, manifest.dump(2) + "\n");
  std::cout << "wrote " << mpath.string() << " (" << grid.size()
            << " points)\n";
  return 0;
}

int run_oracle(const CommonOpts& common, const std::string& what,
               const GainAxis& axis, double p_min, double p_max, long points,
               bool compare, paramp::BranchPolicy policy) {
  const paramp::ConfigData config = paramp::load_config(common.config_path);
  const paramp::ResolvedSystem sys = paramp::resolve(config);
  const paramp::OracleParams params = paramp::oracle_params_from(sys);
  const paramp::Tone pump = paramp::pump_tone_from(sys);
  const fs::path dir = prepare_out(common);

  if (what == "steady") {
    const paramp::SettleResult settled = paramp::settle(params, {pump});
    Json doc = json_banner();
    doc["n"] = std::norm(settled.amplitude) * params.kappa /
               (pump.amplitude * pump.amplitude);
    doc["converged"] = settled.converged;
    doc["time_s"] = settled.time;
    if (compare) {
      const paramp::PumpOperatingPoint op =
          paramp::operating_point(sys, policy);
      doc["analytic_n"] = op.n;
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  const double probe_power =
      sys.probe ? sys.probe->signal_power_dbm : -150.0;
  const double carrier = sys.drive->pump_freq;

  if (what == "p1db") {
    std::vector<double> powers;
    for (long k = 0; k < points; ++k)
      powers.push_back(p_min + k * (p_max - p_min) / (points - 1));
    double delta_probe = 0.5;
    if (sys.probe && sys.probe->delta) delta_probe = *sys.probe->delta;
    const paramp::OracleCompression res = paramp::p1db_oracle(
        params, pump, delta_probe * params.kappa, powers, carrier);
    Json doc = json_banner();
    doc["status"] =
        res.status == paramp::OracleCompressionStatus::Compressed
            ? "compressed"
            : "no_compression_in_range";
    if (res.status == paramp::OracleCompressionStatus::Compressed)
      doc["p1db_dbm"] = res.p1db_dbm;
    Json curve = Json::array();
    for (const auto& [p, g] : res.curve) {
      Json r = Json::object();
      r["signal_power_dbm"] = p;
      r["gain_db"] = g;
      curve.push_back(r);
    }
    doc["curve"] = curve;
    if (compare) {
      const paramp::CompressionResult ana = paramp::analytic_p1db(
          sys, delta_probe, p_min, p_max, 97, policy);
      if (ana.status == paramp::CompressionStatus::Compressed)
        doc["analytic_p1db_dbm"] = ana.p1db_dbm;
    }
    std::cout << doc.dump(2) << "\n";
    if (common.out_given)
      write_text(dir / "oracle_p1db.json", doc.dump(2) + "\n");
    return 0;
  }

  // what == "gain": probe-tone extraction across normalized detunings.
  paramp::CsvTable table;
  table.header = {"delta", "signal_gain_db", "idler_gain_db"};
  std::optional<paramp::PumpOperatingPoint> op;
  if (compare) {
    table.header.push_back("analytic_signal_gain_db");
    table.header.push_back("analytic_idler_gain_db");
    op = paramp::operating_point(sys, policy);
  }
  for (long k = 0; k < axis.points; ++k) {
    const double d =
        axis.from + k * (axis.to - axis.from) /
                        (axis.points > 1 ? axis.points - 1 : 1);
    if (d == 0.0) continue;  // probe must beat against the pump
    paramp::Tone probe;
    probe.amplitude =
        std::sqrt(paramp::flux_from_dbm(probe_power, carrier));
    probe.detuning = d * params.kappa;
    const paramp::ProbeGainResult g =
        paramp::probe_gain(params, pump, probe);
    std::vector<paramp::CsvValue> row{d, g.signal_gain_db, g.idler_gain_db};
    if (compare) {
      const paramp::ScatterMatrix s = paramp::scattering(*op, d);
      row.push_back(paramp::power_db(s.s11));
      row.push_back(paramp::power_db(s.s12));
    }
    table.rows.push_back(std::move(row));
  }
  const fs::path path = dir / "oracle_gain.csv";
  paramp::write_csv(path.string(), table);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_reference(int table_id, const std::string& row,
                  const std::string& column) {
  const paramp::ReferenceTable& table =
      table_id == 1 ? paramp::amplifier_family_comparison()
                    : paramp::jpa_architecture_comparison();
  if (row.empty() && column.empty()) {
    std::cout << paramp::format_reference_table(table);
    return 0;
  }
  if (row.empty() || column.empty())
    throw paramp::config_error(
        "reference needs both --row and --column, or neither");
  std::cout << paramp::lookup(table, row, column) << "\n";
  return 0;
}

int run_selfcheck() {
  int failures = 0;
  auto report = [&](const char* name, bool ok, double worst) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name
              << " (worst " << worst << ")\n";
    if (!ok) ++failures;
  };

  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Steady-state cubic residuals across the drive plane.
  double worst_res = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double delta = 3.0 * u(rng);
    const double zeta = 0.6 * u(rng);
    for (const auto& op : paramp::steady_state(delta, zeta))
      worst_res = std::max(worst_res, paramp::steady_state_residual(op));
  }
  report("steady-state cubic residual < 1e-9", worst_res < 1e-9, worst_res);

  // Photon-number conservation of the two-mode scattering rows.
  double worst_sym = 0.0;
  int checked = 0;
  for (int i = 0; checked < 300 && i < 3000; ++i) {
    const double delta = 3.0 * u(rng);
    const double zeta = 0.6 * u(rng);
    for (const auto& op : paramp::steady_state(delta, zeta)) {
      if (op.stability != paramp::Stability::Stable) continue;
      const double probe = 2.0 * u(rng);
      try {
        const paramp::ScatterMatrix s = paramp::scattering(op, probe);
        const double lhs = std::norm(s.s11) - std::norm(s.s12);
        worst_sym = std::max(worst_sym, std::abs(lhs - 1.0));
        ++checked;
      } catch (const paramp::threshold_error&) {
      }
    }
  }
  report("scattering identity |s11|^2 - |s12|^2 = 1 < 1e-9",
         worst_sym < 1e-9, worst_sym);

  // Quantizer residuals on representative circuits.
  double worst_eig = 0.0;
  {
    paramp::JunctionSpec j = paramp::JunctionSpec::from_energies(
        paramp::ghz_to_rad(800.0), paramp::ghz_to_rad(0.4));
    std::vector<paramp::Architecture> archs;
    archs.push_back(paramp::SingleJunction{j});
    archs.push_back(paramp::SeriesArray{16, j, 0.05e-15, 30e-15});
    archs.push_back(paramp::Blochnium{12, 4, 0.2, j, 0.08e-15});
    paramp::ModifiedBjpa mb;
    mb.n_cells = 1;
    mb.c_g = 0.08e-15;
    mb.c_j = 40e-15;
    mb.c_m = 4e-15;
    mb.c_1 = 20e-15;
    mb.c_2 = 20e-15;
    mb.c_s = 10e-15;
    mb.l_js = 60e-12;
    mb.l_jm = 240e-12;
    mb.l_s = 80e-12;
    mb.e_js = paramp::josephson_energy_from_inductance(60e-12);
    mb.e_jm = paramp::josephson_energy_from_inductance(240e-12);
    mb.n_primary = 8;
    archs.push_back(mb);
    for (const auto& arch : archs) {
      const paramp::CircuitMatrices m = paramp::build_matrices(arch);
      const paramp::ModeSet modes = paramp::solve_modes(m);
      for (long i = 0; i < modes.count(); ++i)
        if (!modes.is_zero_mode(i))
          worst_eig =
              std::max(worst_eig, paramp::eigen_residual(m, modes, i));
    }
  }
  report("eigenmode residual < 1e-10", worst_eig < 1e-10, worst_eig);

  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paramp-lab: parametric amplifier design and analysis"};
  app.require_subcommand(1);

  CommonOpts mo_modes, mo_steady, mo_gain, mo_sweep, mo_p1db, mo_oracle;
  std::string modes_method = "auto";
  auto* cmd_modes = app.add_subcommand("modes", "eigenmode table");
  add_common(cmd_modes, mo_modes, true);
  cmd_modes->add_option("--method", modes_method, "eigensolver")
      ->check(CLI::IsMember({"auto", "dense", "banded"}));

  double ss_delta = 0.0, ss_zeta = 0.0, ss_phase = 0.0;
  auto* cmd_steady =
      app.add_subcommand("steady-state", "pump steady-state roots");
  add_common(cmd_steady, mo_steady, false);
  auto* od = cmd_steady->add_option("--delta", ss_delta,
                                    "normalized pump detuning");
  auto* oz =
      cmd_steady->add_option("--zeta", ss_zeta, "normalized pump drive");
  cmd_steady->add_option("--phase", ss_phase, "pump phase (rad)");

  std::string g_from, g_to, g_branch = "error";
  double g_dfrom = -3.0, g_dto = 3.0;
  long g_points = 401;
  auto* cmd_gain = app.add_subcommand("gain", "small-signal gain spectrum");
  add_common(cmd_gain, mo_gain, true);
  auto* gf = cmd_gain->add_option("--from", g_from, "start frequency (GHz)");
  auto* gt = cmd_gain->add_option("--to", g_to, "end frequency (GHz)");
  cmd_gain->add_option("--delta-from", g_dfrom, "start probe detuning");
  cmd_gain->add_option("--delta-to", g_dto, "end probe detuning");
  cmd_gain->add_option("--points", g_points, "sample count");
  cmd_gain->add_option("--branch", g_branch, "bistable branch policy")
      ->check(CLI::IsMember({"low", "high", "error"}));

  std::string sw_from, sw_to, sw_branch = "low";
  double sw_dfrom = -3.0, sw_dto = 3.0;
  long sw_points = 401;
  auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(cmd_sweep, mo_sweep, true);
  auto* sf = cmd_sweep->add_option("--from", sw_from, "start frequency (GHz)");
  auto* st = cmd_sweep->add_option("--to", sw_to, "end frequency (GHz)");
  cmd_sweep->add_option("--delta-from", sw_dfrom, "start probe detuning");
  cmd_sweep->add_option("--delta-to", sw_dto, "end probe detuning");
  cmd_sweep->add_option("--points", sw_points, "sample count");
  cmd_sweep->add_option("--branch", sw_branch, "bistable branch policy")
      ->check(CLI::IsMember({"low", "high", "error"}));

  double p_delta = 0.5, p_min = -160.0, p_max = -100.0;
  long p_points = 241;
  std::string p_branch = "low";
  auto* cmd_p1db = app.add_subcommand("p1db", "compression point");
  add_common(cmd_p1db, mo_p1db, true);
  cmd_p1db->add_option("--delta", p_delta, "probe detuning");
  cmd_p1db->add_option("--p-min", p_min, "lowest signal power (dBm)");
  cmd_p1db->add_option("--p-max", p_max, "highest signal power (dBm)");
  cmd_p1db->add_option("--points", p_points, "power samples");
  cmd_p1db->add_option("--branch", p_branch, "bistable branch policy")
      ->check(CLI::IsMember({"low", "high", "error"}));

  std::string orc_what = "gain", orc_branch = "low";
  double orc_dfrom = -2.0, orc_dto = 2.0, orc_pmin = -160.0,
         orc_pmax = -110.0;
  long orc_points = 9, orc_ppoints = 11;
  bool orc_compare = false;
  auto* cmd_oracle =
      app.add_subcommand("oracle", "time-domain cross-check");
  add_common(cmd_oracle, mo_oracle, true);
  cmd_oracle->add_option("--what", orc_what, "quantity to measure")
      ->check(CLI::IsMember({"gain", "p1db", "steady"}));
  cmd_oracle->add_option("--delta-from", orc_dfrom, "start probe detuning");
  cmd_oracle->add_option("--delta-to", orc_dto, "end probe detuning");
  cmd_oracle->add_option("--points", orc_points, "probe detuning samples");
  cmd_oracle->add_option("--p-min", orc_pmin, "lowest probe power (dBm)");
  cmd_oracle->add_option("--p-max", orc_pmax, "highest probe power (dBm)");
  cmd_oracle->add_option("--p-points", orc_ppoints, "probe power samples");
  cmd_oracle->add_flag("--compare", orc_compare,
                       "add analytic-engine columns");
  cmd_oracle->add_option("--branch", orc_branch, "bistable branch policy")
      ->check(CLI::IsMember({"low", "high", "error"}));

  int ref_table = 1;
  std::string ref_row, ref_column;
  auto* cmd_ref = app.add_subcommand("reference", "published benchmark data");
  cmd_ref->add_option("--table", ref_table, "table number")
      ->check(CLI::IsMember({1, 2}));
  cmd_ref->add_option("--row", ref_row, "parameter row");
  cmd_ref->add_option("--column", ref_column, "amplifier column");

  auto* cmd_self = app.add_subcommand("selfcheck", "fast invariant suite");
  (void)cmd_self;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_modes->parsed()) return run_modes(mo_modes, modes_method);
    if (cmd_steady->parsed())
      return run_steady_state(mo_steady, od->count() > 0, ss_delta,
                              oz->count() > 0, ss_zeta, ss_phase);
    if (cmd_gain->parsed()) {
      GainAxis axis;
      if (gf->count() || gt->count()) {
        if (!gf->count() || !gt->count())
          throw paramp::config_error("gain needs both --from and --to");
        axis.frequency = true;
        axis.from = parse_freq_ghz(g_from);
        axis.to = parse_freq_ghz(g_to);
      } else {
        axis.from = g_dfrom;
        axis.to = g_dto;
      }
      axis.points = g_points;
      return run_gain(mo_gain, axis, parse_branch(g_branch), "gain");
    }
    if (cmd_sweep->parsed()) {
      GainAxis axis;
      if (sf->count() || st->count()) {
        if (!sf->count() || !st->count())
          throw paramp::config_error("sweep needs both --from and --to");
        axis.frequency = true;
        axis.from = parse_freq_ghz(sw_from);
        axis.to = parse_freq_ghz(sw_to);
      } else {
        axis.from = sw_dfrom;
        axis.to = sw_dto;
      }
      axis.points = sw_points;
      return run_sweep(mo_sweep, axis, parse_branch(sw_branch));
    }
    if (cmd_p1db->parsed())
      return run_p1db(mo_p1db, p_delta, p_min, p_max, p_points,
                      parse_branch(p_branch));
    if (cmd_oracle->parsed()) {
      GainAxis axis;
      axis.from = orc_dfrom;
      axis.to = orc_dto;
      axis.points = orc_points;
      return run_oracle(mo_oracle, orc_what, axis, orc_pmin, orc_pmax,
                        orc_ppoints, orc_compare, parse_branch(orc_branch));
    }
    if (cmd_ref->parsed()) return run_reference(ref_table, ref_row, ref_column);
    if (cmd_self->parsed()) return run_selfcheck();
  } catch (const paramp::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
