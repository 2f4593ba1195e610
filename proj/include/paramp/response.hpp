#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paramp/errors.hpp"
#include "paramp/nonlinearity.hpp"
#include "paramp/pump.hpp"

// Linearized input-output response: two-mode scattering matrices for the
// normalized and single-junction engines, computed by explicit 2x2
// inversion of the fluctuation system matrix.

namespace paramp {

struct ScatterMatrix {
  std::complex<double> s11{0, 0}, s12{0, 0}, s21{0, 0}, s22{0, 0};
  double probe_detuning = 0.0;
  double det_abs = 0.0;  // |det M| of the inverted system matrix
};

inline double power_db(std::complex<double> amplitude) {
  const double p = std::norm(amplitude);
  if (p <= 1e-30) return -300.0;  // numerical floor stand-in for -inf
  return 10.0 * std::log10(p);
}

// Normalized engine: rates are in units of kappa, probe detuning measured
// from the pump. S = M^{-1} - I with
//   M = [ i(-delta - D + 2 zn) + 1/2      i zn e^{+2i phi} ]
//       [ -i zn e^{-2i phi}          i(delta - D - 2 zn) + 1/2 ].
inline ScatterMatrix scattering(const PumpOperatingPoint& op,
                                double probe_detuning) {
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  const double zn = op.zeta * op.n;
  const double d = probe_detuning;
  const C m11 = i * (-op.delta - d + 2.0 * zn) + 0.5;
  const C m12 = i * zn * std::exp(2.0 * i * op.phase);
  const C m21 = -i * zn * std::exp(-2.0 * i * op.phase);
  const C m22 = i * (op.delta - d - 2.0 * zn) + 0.5;
  const C det = m11 * m22 - m12 * m21;
  if (std::abs(det) < 1e-14) {
    std::ostringstream os;
    os << "scattering: system matrix singular at delta = " << op.delta
       << ", zeta*n = " << zn << ", probe detuning = " << d
       << " (parametric oscillation threshold)";
    throw threshold_error(os.str());
  }
  ScatterMatrix s;
  s.probe_detuning = d;
  s.det_abs = std::abs(det);
  s.s11 = m22 / det - 1.0;
  s.s12 = -m12 / det;
  s.s21 = -m21 / det;
  s.s22 = m11 / det - 1.0;
  return s;
}

// Single-junction engine in physical rates: S = kappa M^{-1} - I with
//   M = [ -i(w + Delta0) + kappa/2        i lambda1      ]
//       [ -i conj(lambda1)          i(w - Delta0) + kappa/2 ].
inline ScatterMatrix single_jj_scattering(const DisplacedFrame& frame,
                                          double kappa, double omega) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("single_jj_scattering: kappa must be positive");
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  const C m11 = -i * (omega + frame.delta0) + kappa / 2.0;
  const C m12 = i * frame.lambda1;
  const C m21 = -i * std::conj(frame.lambda1);
  const C m22 = i * (omega - frame.delta0) + kappa / 2.0;
  const C det = m11 * m22 - m12 * m21;
  if (std::abs(det) < 1e-14 * kappa * kappa) {
    std::ostringstream os;
    os << "single_jj_scattering: system matrix singular at omega = " << omega
       << ", |lambda1| = " << std::abs(frame.lambda1)
       << " (parametric oscillation threshold)";
    throw threshold_error(os.str());
  }
  ScatterMatrix s;
  s.probe_detuning = omega / kappa;
  s.det_abs = std::abs(det);
  s.s11 = kappa * m22 / det - 1.0;
  s.s12 = -kappa * m12 / det;
  s.s21 = -kappa * m21 / det;
  s.s22 = kappa * m11 / det - 1.0;
  return s;
}

// Exact parameter map from the normalized engine onto the single-junction
// engine: with omega = kappa (delta - 2 zeta n), delta0 = kappa * Delta and
// lambda1 = kappa * zeta n * e^{2 i phase}, the two system matrices satisfy
// M_single = kappa * M_normalized entry by entry, so the scattering
// matrices coincide. Note |lambda1| = |zeta n| * kappa: the normalized
// off-diagonal already carries the factor 2 from the condensate term.
struct EngineMap {
  DisplacedFrame frame;
  double omega = 0.0;
};

inline EngineMap normalized_to_single_jj(const PumpOperatingPoint& op,
                                         double probe_detuning, double kappa) {
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  const double zn = op.zeta * op.n;
  EngineMap map;
  map.frame.delta0 = kappa * probe_detuning;
  map.frame.lambda1 = kappa * zn * std::exp(2.0 * i * op.phase);
  map.frame.mu0 = map.frame.lambda1;
  map.omega = kappa * (op.delta - 2.0 * zn);
  return map;
}

struct GainPoint {
  double x = 0.0;  // probe detuning or absolute frequency in GHz
  double signal_gain_db = 0.0;
  double idler_gain_db = -300.0;
};

struct ModeCurve {
  long mode_index = 0;
  double omega_mode = 0.0;  // rad/s
  PumpOperatingPoint operating_point;
  std::vector<GainPoint> points;
};

struct GainCurve {
  std::vector<GainPoint> points;
  PumpOperatingPoint operating_point;
  std::string architecture;
  std::string x_label;  // "delta" or "freq_ghz"
  std::vector<ModeCurve> mode_curves;  // populated for mode-comb spectra
};

inline GainPoint gain_at(const PumpOperatingPoint& op, double probe_detuning,
                         double x_value) {
  const ScatterMatrix s = scattering(op, probe_detuning);
  return {x_value, power_db(s.s11), power_db(s.s12)};
}

// Signal/idler gain over a probe detuning grid for one operating point.
inline GainCurve gain_spectrum(const PumpOperatingPoint& op, double delta_from,
                               double delta_to, long points) {
  if (points < 2)
    throw std::invalid_argument("gain_spectrum: need at least 2 points");
  if (op.stability != Stability::Stable)
    throw threshold_error(
        "gain_spectrum: operating point unstable; select a stable branch "
        "(LowBranch/HighBranch) or reduce the pump drive");
  GainCurve curve;
  curve.operating_point = op;
  curve.x_label = "delta";
  curve.points.reserve(points);
  const double step = (delta_to - delta_from) / (points - 1);
  for (long k = 0; k < points; ++k) {
    const double d = delta_from + k * step;
    curve.points.push_back(gain_at(op, d, d));
  }
  return curve;
}

// Pump-off reflection of the bare oscillator, referenced so the
// far-detuned phase is zero and the on-resonance phase is pi.
struct ReflectionPoint {
  double omega = 0.0;      // rad/s
  double magnitude = 0.0;  // |s11|
  double phase = 0.0;      // rad, unwrapped by the caller if needed
};

inline std::vector<ReflectionPoint> linear_response(double omega_eff,
                                                    double kappa,
                                                    double omega_from,
                                                    double omega_to,
                                                    long points) {
  if (points < 2)
    throw std::invalid_argument("linear_response: need at least 2 points");
  using C = std::complex<double>;
  std::vector<ReflectionPoint> out;
  out.reserve(points);
  const double step = (omega_to - omega_from) / (points - 1);
  for (long k = 0; k < points; ++k) {
    const double w = omega_from + k * step;
    const C denom{kappa / 2.0, omega_eff - w};
    const C s = 1.0 - kappa / denom;
    out.push_back({w, std::abs(s), std::arg(s)});
  }
  return out;
}

enum class CompressionStatus { Compressed, NoCompressionInRange };

struct CompressionPoint {
  double signal_power_dbm = 0.0;
  double gain_db = 0.0;
};

struct CompressionResult {
  CompressionStatus status = CompressionStatus::NoCompressionInRange;
  double p1db_dbm = 0.0;          // valid when status == Compressed
  double reference_gain_db = 0.0;  // gain at the lowest requested power
  std::vector<CompressionPoint> curve;
};

// Total-flux compression model: the circulating signal flux adds to the
// pump flux in the steady-state cubic, Stark-shifting the operating
// point; the gain is re-evaluated at the signal detuning. The caller
// supplies the power-to-drive map zeta_signal(P), including any gain
// enhancement of the circulating power.
template <typename ZetaOfPower>
CompressionResult compression_curve(double delta, double zeta_pump,
                                    double pump_phase, double probe_detuning,
                                    ZetaOfPower&& zeta_signal,
                                    double power_min_dbm, double power_max_dbm,
                                    long points, BranchPolicy policy) {
  if (points < 2)
    throw std::invalid_argument("compression: need at least 2 power points");
  if (!(power_max_dbm > power_min_dbm))
    throw std::invalid_argument("compression: power range must be increasing");

  auto gain_at_power = [&](double p_dbm) -> double {
    const double zeta_tot = zeta_pump + zeta_signal(p_dbm);
    const auto roots = steady_state(delta, zeta_tot, pump_phase);
    const PumpOperatingPoint op = select_branch(roots, policy);
    const ScatterMatrix s = scattering(op, probe_detuning);
    return power_db(s.s11);
  };

  CompressionResult res;
  const double step = (power_max_dbm - power_min_dbm) / (points - 1);
  for (long k = 0; k < points; ++k) {
    const double p = power_min_dbm + k * step;
    res.curve.push_back({p, gain_at_power(p)});
  }
  res.reference_gain_db = res.curve.front().gain_db;
  const double target = res.reference_gain_db - 1.0;

  for (size_t k = 1; k < res.curve.size(); ++k) {
    if (res.curve[k].gain_db > target) continue;
    // Bracketed crossing: bisect the power axis to 0.01 dB width.
    double lo = res.curve[k - 1].signal_power_dbm;
    double hi = res.curve[k].signal_power_dbm;
    while (hi - lo > 0.01) {
      const double mid = 0.5 * (lo + hi);
      (gain_at_power(mid) > target ? lo : hi) = mid;
    }
    res.status = CompressionStatus::Compressed;
    res.p1db_dbm = 0.5 * (lo + hi);
    return res;
  }
  res.status = CompressionStatus::NoCompressionInRange;
  return res;
}

struct SweepEntry {
  double drive_value = 0.0;  // in the units of the swept drive strength
  std::string status;        // "ok", "bistable", or a diagnostic
  bool bistable = false;
  std::optional<GainCurve> curve;
};

// One gain spectrum per drive value; bistable drives are flagged and
// resolved by the branch policy, never silently dropped.
template <typename ZetaOfDrive>
std::vector<SweepEntry> pump_drive_sweep(const std::vector<double>& drives,
                                         double delta, double pump_phase,
                                         ZetaOfDrive&& zeta_of_drive,
                                         double delta_from, double delta_to,
                                         long points, BranchPolicy policy) {
  std::vector<SweepEntry> out;
  out.reserve(drives.size());
  for (double value : drives) {
    SweepEntry entry;
    entry.drive_value = value;
    const double zeta = zeta_of_drive(value);
    const auto roots = steady_state(delta, zeta, pump_phase);
    entry.bistable = roots.size() >= 3;
    try {
      const PumpOperatingPoint op = select_branch(roots, policy);
      entry.curve = gain_spectrum(op, delta_from, delta_to, points);
      entry.status = entry.bistable ? "bistable" : "ok";
    } catch (const bistability_error& e) {
      entry.status = std::string("bistable: ") + e.what();
    } catch (const threshold_error& e) {
      entry.status = std::string("unstable: ") + e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace paramp
