#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paramp/config.hpp"
#include "paramp/errors.hpp"
#include "paramp/model.hpp"
#include "paramp/nonlinearity.hpp"
#include "paramp/oracle.hpp"
#include "paramp/pump.hpp"
#include "paramp/quantizer.hpp"
#include "paramp/response.hpp"

// Orchestration: turn a validated configuration into mode data, an
// operating point, gain curves, and oracle inputs.

namespace paramp {

struct ResolvedSystem {
  Architecture arch;
  Environment env;
  CircuitMatrices matrices;
  ModeSet modes;
  long mode_index = 0;  // lowest finite-frequency mode
  EffectiveOscillator osc;
  KerrSpec kerr;
  std::optional<Drive> drive;
  std::optional<Probe> probe;
  std::optional<double> pump_flux;  // photons/s when a physical drive given
  std::optional<double> delta;      // normalized pump detuning
  std::optional<double> zeta;       // normalized pump drive
};

inline ResolvedSystem resolve(const ConfigData& config,
                              EigenMethod method = EigenMethod::Auto) {
  ResolvedSystem sys;
  sys.arch = to_architecture(config.architecture);
  sys.env = to_environment(config.environment);
  if (config.drive) sys.drive = to_drive(*config.drive);
  if (config.probe) sys.probe = to_probe(*config.probe);

  Drive check_drive = sys.drive.value_or(
      Drive{ghz_to_rad(1.0), 0.0, NormalizedZeta{0.0}});
  const ValidationReport report = validate(sys.arch, sys.env, check_drive);
  if (!report.ok()) throw config_error(report.summary());

  sys.matrices = build_matrices(sys.arch);
  sys.modes = solve_modes(sys.matrices, method);
  long first_finite = -1;
  for (long i = 0; i < sys.modes.count(); ++i)
    if (!sys.modes.is_zero_mode(i)) {
      first_finite = i;
      break;
    }
  if (first_finite < 0)
    throw numerical_error("resolve: circuit has no finite-frequency mode");
  sys.mode_index = first_finite;
  sys.osc = effective_params(sys.modes, sys.matrices, sys.mode_index, sys.env);
  sys.kerr = kerr_coefficient(sys.arch);

  if (sys.drive) {
    const ResolvedDrive rd =
        drive_to_flux(*sys.drive, sys.env, sys.drive->pump_freq);
    if (rd.zeta) {
      sys.zeta = *rd.zeta;
      sys.delta = (sys.drive->pump_freq - sys.osc.omega_eff) / sys.osc.kappa;
      // Physical flux only recoverable when the Kerr sign matches.
      if (sys.kerr.kerr != 0.0 && *rd.zeta / sys.kerr.kerr >= 0.0)
        sys.pump_flux =
            *rd.zeta * sys.osc.kappa * sys.osc.kappa / sys.kerr.kerr;
    } else {
      sys.pump_flux = rd.flux;
      const auto [d, z] =
          normalize(sys.kerr, sys.osc.kappa, *rd.flux, sys.drive->pump_freq,
                    sys.osc.omega_eff);
      sys.delta = d;
      sys.zeta = z;
    }
  }
  return sys;
}

inline PumpOperatingPoint operating_point(
    const ResolvedSystem& sys, BranchPolicy policy = BranchPolicy::Error) {
  if (!sys.delta || !sys.zeta)
    throw config_error(
        "operating point requires a drive section in the configuration");
  const double phase = sys.drive ? sys.drive->pump_phase : 0.0;
  return select_branch(steady_state(*sys.delta, *sys.zeta, phase), policy);
}

// Probe detuning in kappa units for a signal frequency in rad/s.
inline double probe_detuning_from_freq(const ResolvedSystem& sys,
                                       double signal_freq) {
  if (!sys.drive)
    throw config_error("probe frequency needs a drive (pump) frequency");
  return (signal_freq - sys.drive->pump_freq) / sys.osc.kappa;
}

inline GainCurve gain_vs_frequency(const ResolvedSystem& sys,
                                   const PumpOperatingPoint& op,
                                   double f_from_ghz, double f_to_ghz,
                                   long points) {
  if (points < 2)
    throw std::invalid_argument("gain_vs_frequency: need at least 2 points");
  GainCurve curve;
  curve.operating_point = op;
  curve.architecture = architecture_name(sys.arch);
  curve.x_label = "freq_ghz";
  const double step = (f_to_ghz - f_from_ghz) / (points - 1);
  for (long k = 0; k < points; ++k) {
    const double f = f_from_ghz + k * step;
    const double detuning = probe_detuning_from_freq(sys, ghz_to_rad(f));
    GainPoint p = gain_at(op, detuning, f);
    curve.points.push_back(p);
  }
  return curve;
}

// Per-mode operating data for architectures whose spectrum carries
// several coupled modes in band.
struct CombMode {
  long index = 0;
  double omega = 0.0;       // rad/s
  double kappa = 0.0;       // rad/s
  double participation = 0.0;
  double kerr = 0.0;        // rad/s
  double zeta = 0.0;
  double delta = 0.0;       // per-channel pump placement, kappa units
  PumpOperatingPoint op;
};

namespace pipeline_detail {

// Junction branch list (node pairs) per architecture; linear elements
// are excluded since only junction branches contribute quartic terms.
inline std::vector<std::pair<long, long>> junction_branches(
    const Architecture& arch) {
  struct V {
    std::vector<std::pair<long, long>> operator()(
        const SingleJunction&) const {
      return {{-1, 0}};  // -1 encodes ground
    }
    std::vector<std::pair<long, long>> operator()(const SeriesArray& a) const {
      std::vector<std::pair<long, long>> out;
      for (long k = 0; k < a.n; ++k) out.push_back({k, k + 1});
      return out;
    }
    std::vector<std::pair<long, long>> operator()(const Blochnium& a) const {
      std::vector<std::pair<long, long>> out;
      for (long k = 0; k < a.n_quartons; ++k) out.push_back({k, k + 1});
      return out;
    }
    std::vector<std::pair<long, long>> operator()(
        const ModifiedBjpa& a) const {
      std::vector<std::pair<long, long>> out;
      for (long cell = 0; cell < a.n_cells; ++cell) {
        const long base = cell * 8;
        for (long k = 0; k < 8; ++k) out.push_back({base + k, base + k + 1});
        out.push_back({base, base + 4});
        out.push_back({base + 4, base + 8});
      }
      return out;
    }
  };
  return std::visit(V{}, arch);
}

inline double mode_participation(const Architecture& arch,
                                 const ModeSet& modes, long index) {
  const auto branches = junction_branches(arch);
  double quad = 0.0, quart = 0.0;
  for (const auto& [a, b] : branches) {
    const double pa = a < 0 ? 0.0 : modes.shapes(a, index);
    const double pb = b < 0 ? 0.0 : modes.shapes(b, index);
    const double d = pb - pa;
    quad += d * d;
    quart += d * d * d * d;
  }
  if (quad <= 0.0) return 0.0;
  return quart / (quad * quad);
}

// Channel placement: find the pump photon number z = |zeta| n that puts
// the linearization margin (delta - 2z)^2 + 1/4 - z^2 at `margin`, on
// the branch delta = 2z + u. The margin fixes the tooth gain; margins
// below 1/2 keep the response single-peaked at the pump. Returns the
// z solving |zeta| = z ((z + u)^2 + 1/4), or a negative value when the
// drive is too weak to reach the margin.
inline double comb_z_for_zeta(double zeta_mag, double margin) {
  const double z_min = std::sqrt(0.25 - margin);
  auto zeta_of = [margin](double z) {
    const double u = std::sqrt(margin + z * z - 0.25);
    const double w = z + u;
    return z * (w * w + 0.25);
  };
  if (zeta_mag < zeta_of(z_min)) return -1.0;
  double lo = z_min, hi = z_min + 0.5;
  while (zeta_of(hi) < zeta_mag) hi += 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (zeta_of(mid) < zeta_mag ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pipeline_detail

// Frequency-selective multi-mode picture: each finite mode is treated as
// an independently pumpable channel, the drive apportioned by how
// strongly the mode's shape folds into the junction branches and the
// pump placed per channel at a fixed linearization margin. The comb
// shows the achievable per-channel gain profile, not a simultaneous
// single-pump response.
inline constexpr double comb_margin = 0.04;

inline std::vector<CombMode> comb_modes(const ResolvedSystem& sys) {
  if (!sys.zeta)
    throw config_error("comb analysis requires a drive section");
  const double phase = sys.drive ? sys.drive->pump_phase : 0.0;
  std::vector<CombMode> out;
  std::vector<double> parts;
  double part_ref = 0.0;
  for (long i = 0; i < sys.modes.count(); ++i) {
    if (sys.modes.is_zero_mode(i)) continue;
    const double p =
        pipeline_detail::mode_participation(sys.arch, sys.modes, i);
    if (i == sys.mode_index) part_ref = p;
    parts.push_back(p);
  }
  if (part_ref <= 0.0)
    part_ref = *std::max_element(parts.begin(), parts.end());
  std::size_t slot = 0;
  for (long i = 0; i < sys.modes.count(); ++i) {
    if (sys.modes.is_zero_mode(i)) continue;
    CombMode cm;
    cm.index = i;
    cm.omega = sys.modes.frequencies(i);
    const EffectiveOscillator osc =
        effective_params(sys.modes, sys.matrices, i, sys.env);
    cm.kappa = osc.kappa;
    cm.participation = parts[slot++];
    cm.kerr = sys.kerr.kerr * (part_ref > 0.0 ? cm.participation / part_ref
                                              : 0.0);
    if (sys.pump_flux && sys.kerr.kerr != 0.0) {
      cm.zeta = cm.kerr * *sys.pump_flux / (cm.kappa * cm.kappa);
    } else {
      const double scale =
          (part_ref > 0.0 ? cm.participation / part_ref : 0.0) *
          (sys.osc.kappa / cm.kappa) * (sys.osc.kappa / cm.kappa);
      cm.zeta = *sys.zeta * scale;
    }

    const double sign = cm.zeta < 0.0 ? -1.0 : 1.0;
    const double z =
        pipeline_detail::comb_z_for_zeta(std::abs(cm.zeta), comb_margin);
    if (z > 0.0) {
      const double u = std::sqrt(comb_margin + z * z - 0.25);
      cm.delta = sign * (2.0 * z + u);
      const double n_target = z / std::abs(cm.zeta);
      const auto roots = steady_state(cm.delta, cm.zeta, phase);
      const PumpOperatingPoint* best = nullptr;
      for (const auto& r : roots) {
        if (r.stability != Stability::Stable) continue;
        if (!best || std::abs(r.n - n_target) < std::abs(best->n - n_target))
          best = &r;
      }
      if (!best)
        throw numerical_error(
            "comb_modes: channel placement found no stable root");
      cm.op = *best;
    } else {
      // Too weak for the target margin: fall back to resonant pumping,
      // which is single-peaked for any drive below z^2 = 1/12.
      cm.delta = 0.0;
      cm.op = select_branch(steady_state(0.0, cm.zeta, phase),
                            BranchPolicy::LowBranch);
    }
    out.push_back(cm);
  }
  return out;
}

// Envelope over the per-mode curves; mode_curves carries each component.
inline GainCurve comb_spectrum(const ResolvedSystem& sys, double f_from_ghz,
                               double f_to_ghz, long points) {
  if (points < 2)
    throw std::invalid_argument("comb_spectrum: need at least 2 points");
  const std::vector<CombMode> cms = comb_modes(sys);
  GainCurve curve;
  curve.architecture = architecture_name(sys.arch);
  curve.x_label = "freq_ghz";
  curve.operating_point = cms.empty() ? PumpOperatingPoint{} : cms.front().op;

  for (const auto& cm : cms) {
    ModeCurve mc;
    mc.mode_index = cm.index;
    mc.omega_mode = cm.omega;
    mc.operating_point = cm.op;
    curve.mode_curves.push_back(mc);
  }

  const double step = (f_to_ghz - f_from_ghz) / (points - 1);
  for (long k = 0; k < points; ++k) {
    const double f = f_from_ghz + k * step;
    const double omega = ghz_to_rad(f);
    GainPoint best;
    best.x = f;
    best.signal_gain_db = -300.0;
    best.idler_gain_db = -300.0;
    for (std::size_t m = 0; m < cms.size(); ++m) {
      const auto& cm = cms[m];
      const double detuning = (omega - cm.omega) / cm.kappa;
      const GainPoint p = gain_at(cm.op, detuning, f);
      curve.mode_curves[m].points.push_back(p);
      if (p.signal_gain_db > best.signal_gain_db) best = p;
    }
    curve.points.push_back(best);
  }
  return curve;
}

// Interior strict local maxima with plateau handling: a peak must rise
// above the nearest differing neighbors on both sides.
inline long count_peaks(const std::vector<GainPoint>& points,
                        double min_height_db = -100.0) {
  long peaks = 0;
  const long n = static_cast<long>(points.size());
  for (long i = 1; i + 1 < n; ++i) {
    const double y = points[i].signal_gain_db;
    if (y < min_height_db) continue;
    if (points[i - 1].signal_gain_db == y) continue;  // count a plateau once
    long l = i - 1;
    while (l >= 0 && points[l].signal_gain_db == y) --l;
    if (l < 0 || points[l].signal_gain_db >= y) continue;
    long r = i + 1;
    while (r < n && points[r].signal_gain_db == y) ++r;
    if (r >= n || points[r].signal_gain_db >= y) continue;
    ++peaks;
  }
  return peaks;
}

// Signal-power to normalized signal drive for the compression model; the
// pump carrier converts power to flux.
inline CompressionResult analytic_p1db(const ResolvedSystem& sys,
                                       double probe_detuning,
                                       double power_min_dbm,
                                       double power_max_dbm, long points,
                                       BranchPolicy policy) {
  if (!sys.delta || !sys.zeta || !sys.drive)
    throw config_error("compression analysis requires a drive section");
  const double carrier = sys.drive->pump_freq;
  const double kappa = sys.osc.kappa;
  const double kerr = sys.kerr.kerr;
  // The Kerr shift responds to the circulating signal power, which is the
  // input amplified by the small-signal gain at the probe detuning.
  const PumpOperatingPoint op = operating_point(sys, policy);
  const double buildup = std::norm(scattering(op, probe_detuning).s11);
  auto zeta_of_power = [carrier, kappa, kerr, buildup](double p_dbm) {
    return kerr * buildup * flux_from_dbm(p_dbm, carrier) / (kappa * kappa);
  };
  return compression_curve(*sys.delta, *sys.zeta, sys.drive->pump_phase,
                           probe_detuning, zeta_of_power, power_min_dbm,
                           power_max_dbm, points, policy);
}

// Time-domain bridge: same physical parameters, no shared solver state.
inline OracleParams oracle_params_from(const ResolvedSystem& sys) {
  OracleParams p;
  p.kappa = sys.osc.kappa;
  p.kerr = sys.kerr.kerr;
  p.pump_detuning =
      sys.drive ? sys.drive->pump_freq - sys.osc.omega_eff : 0.0;
  return p;
}

inline Tone pump_tone_from(const ResolvedSystem& sys) {
  if (!sys.pump_flux)
    throw config_error(
        "time-domain pump tone needs a physical drive strength (flux, dbm, "
        "or microamp), or a zeta whose sign matches the Kerr coefficient");
  Tone t;
  t.amplitude = std::sqrt(*sys.pump_flux);
  t.detuning = 0.0;
  t.phase = sys.drive ? sys.drive->pump_phase : 0.0;
  return t;
}

}  // namespace paramp
