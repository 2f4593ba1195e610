#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <vector>

#include "paramp/constants.hpp"
#include "paramp/errors.hpp"
#include "paramp/model.hpp"

// Independent time-domain check of the analytic engines: classical
// noise-free Langevin equation in the pump rotating frame,
//   da/dt = (i pump_detuning - kappa/2 - i K |a|^2) a
//           + sqrt(kappa) sum_j A_j exp(-i delta_j t + i phi_j),
// integrated with an adaptive embedded Runge-Kutta pair. Nothing in this
// header calls the steady-state or scattering code it validates.

namespace paramp {

struct OracleParams {
  double pump_detuning = 0.0;  // w_p - w_eff, rad/s
  double kerr = 0.0;           // rad/s
  double kappa = 0.0;          // rad/s
};

struct Tone {
  double amplitude = 0.0;  // sqrt(photon flux), 1/sqrt(s)
  double detuning = 0.0;   // rad/s, relative to the pump frame
  double phase = 0.0;      // rad
};

struct IntegrateOptions {
  double tolerance = 1e-10;  // relative local error per step
  long samples = 1 << 13;    // uniform record length
  double t0 = 0.0;           // absolute start time (tone phases use it)
  std::complex<double> initial{0.0, 0.0};
  double transient_time = -1.0;  // record index cut; negative = 10/kappa
};

struct Trajectory {
  std::vector<double> times;  // uniform, endpoint-exclusive
  std::vector<std::complex<double>> amplitudes;
  OracleParams params;
  std::vector<Tone> tones;
  std::size_t transient_cut = 0;
  std::complex<double> final_amplitude{0.0, 0.0};
  double final_time = 0.0;
};

namespace oracle_detail {

inline std::complex<double> drive_in(const std::vector<Tone>& tones,
                                     double t) {
  std::complex<double> s{0.0, 0.0};
  for (const auto& tone : tones)
    s += tone.amplitude *
         std::exp(std::complex<double>(0.0, -tone.detuning * t + tone.phase));
  return s;
}

inline std::complex<double> rhs(const OracleParams& p,
                                const std::vector<Tone>& tones, double t,
                                std::complex<double> a) {
  const std::complex<double> coeff(
      -p.kappa / 2.0, p.pump_detuning - p.kerr * std::norm(a));
  return coeff * a + std::sqrt(p.kappa) * drive_in(tones, t);
}

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const OracleParams& p;
  const std::vector<Tone>& tones;
  double atol;
  double rtol;
  double guard;

  double t;
  std::complex<double> a;
  std::complex<double> k1;
  double h;

  Stepper(const OracleParams& params, const std::vector<Tone>& tn,
          double tolerance, double guard_amp, double t0,
          std::complex<double> a0)
      : p(params), tones(tn), rtol(tolerance), guard(guard_amp), t(t0), a(a0) {
    double amp_ref = std::abs(a0);
    for (const auto& tone : tn)
      amp_ref += 2.0 * tone.amplitude / std::sqrt(p.kappa);
    atol = rtol * std::max(amp_ref, 1e-300);
    double rate = p.kappa / 2.0 + std::abs(p.pump_detuning) +
                  std::abs(p.kerr) * amp_ref * amp_ref;
    for (const auto& tone : tn) rate += std::abs(tone.detuning);
    h = 0.01 / std::max(rate, 1e-300);
    k1 = rhs(p, tones, t, a);
  }

  // One accepted step of size at most h_max; adapts h internally.
  void advance(double h_max) {
    using C = std::complex<double>;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double hs = std::min(h, h_max);
      const C k2 = rhs(p, tones, t + c2 * hs, a + hs * (a21 * k1));
      const C k3 = rhs(p, tones, t + c3 * hs, a + hs * (a31 * k1 + a32 * k2));
      const C k4 =
          rhs(p, tones, t + c4 * hs, a + hs * (a41 * k1 + a42 * k2 + a43 * k3));
      const C k5 = rhs(p, tones, t + c5 * hs,
                       a + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const C k6 = rhs(
          p, tones, t + hs,
          a + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const C a_new =
          a + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const C k7 = rhs(p, tones, t + hs, a_new);
      const C err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                          e7 * k7);
      const double scale =
          atol + rtol * std::max(std::abs(a), std::abs(a_new));
      const double ratio = std::abs(err) / scale;
      const double grow =
          ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      if (ratio <= 1.0) {
        t += hs;
        a = a_new;
        k1 = k7;  // first-same-as-last
        if (hs >= h) h *= std::clamp(grow, 0.2, 5.0);
        if (std::abs(a) > guard) {
          std::ostringstream os;
          os << "integrate: |a| exceeded the divergence guard at t = " << t
             << " s";
          throw instability_error(t, os.str());
        }
        return;
      }
      h = hs * std::clamp(grow, 0.2, 5.0);
    }
    throw numerical_error(
        "integrate: step size control failed to find an acceptable step");
  }

  void advance_to(double t_target) {
    while (t < t_target) {
      const double remaining = t_target - t;
      if (remaining <= 1e-15 * std::max(1.0, std::abs(t))) {
        t = t_target;
        return;
      }
      advance(remaining);
    }
  }
};

inline double guard_amplitude(const OracleParams& p,
                              const std::vector<Tone>& tones,
                              std::complex<double> a0) {
  double amp = std::abs(a0);
  for (const auto& tone : tones)
    amp += 2.0 * tone.amplitude / std::sqrt(p.kappa);
  return 1e6 * std::max(amp, 1e-12);
}

}  // namespace oracle_detail

// Deterministic adaptive integration over [t0, t0 + t_span] with a
// uniform endpoint-exclusive sample grid; the exact state at the end of
// the span is carried in final_amplitude.
inline Trajectory integrate(const OracleParams& params,
                            const std::vector<Tone>& tones, double t_span,
                            const IntegrateOptions& opts = {}) {
  if (!(params.kappa > 0.0))
    throw std::invalid_argument("integrate: kappa must be positive");
  if (!(t_span > 0.0))
    throw std::invalid_argument("integrate: t_span must be positive");
  if (opts.samples < 1)
    throw std::invalid_argument("integrate: need at least one sample");

  oracle_detail::Stepper step(
      params, tones, opts.tolerance,
      oracle_detail::guard_amplitude(params, tones, opts.initial), opts.t0,
      opts.initial);

  Trajectory traj;
  traj.params = params;
  traj.tones = tones;
  traj.times.reserve(opts.samples);
  traj.amplitudes.reserve(opts.samples);
  const double dt = t_span / static_cast<double>(opts.samples);
  for (long k = 0; k < opts.samples; ++k) {
    const double tk = opts.t0 + k * dt;
    step.advance_to(tk);
    traj.times.push_back(tk);
    traj.amplitudes.push_back(step.a);
  }
  step.advance_to(opts.t0 + t_span);
  traj.final_amplitude = step.a;
  traj.final_time = step.t;

  const double cut_time =
      opts.transient_time >= 0.0 ? opts.transient_time : 10.0 / params.kappa;
  traj.transient_cut = traj.times.size();
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    if (traj.times[k] - opts.t0 >= cut_time) {
      traj.transient_cut = k;
      break;
    }
  return traj;
}

struct SettleResult {
  std::complex<double> amplitude{0.0, 0.0};
  double time = 0.0;
  bool converged = false;
};

// Integrates a constant-drive (all tones at zero detuning) system in
// chunks until the flow field at the current state is negligible against
// kappa |a|, i.e. the trajectory has parked on a stable branch.
inline SettleResult settle(const OracleParams& params,
                           const std::vector<Tone>& tones,
                           double rel_tol = 1e-9,
                           double max_time_in_inverse_kappa = 4000.0,
                           double tolerance = 1e-11) {
  for (const auto& tone : tones)
    if (tone.detuning != 0.0)
      throw std::invalid_argument(
          "settle: requires a time-independent drive (zero tone detunings)");
  const double chunk = 25.0 / params.kappa;
  SettleResult res;
  std::complex<double> a{0.0, 0.0};
  double t = 0.0;
  const long max_chunks =
      static_cast<long>(max_time_in_inverse_kappa / 25.0) + 1;
  for (long i = 0; i < max_chunks; ++i) {
    IntegrateOptions opts;
    opts.tolerance = tolerance;
    opts.samples = 2;
    opts.t0 = t;
    opts.initial = a;
    const Trajectory chunk_traj = integrate(params, tones, chunk, opts);
    a = chunk_traj.final_amplitude;
    t = chunk_traj.final_time;
    const double flow = std::abs(oracle_detail::rhs(params, tones, t, a));
    if (flow <= rel_tol * params.kappa * std::max(std::abs(a), 1e-300)) {
      res.converged = true;
      break;
    }
  }
  res.amplitude = a;
  res.time = t;
  return res;
}

inline std::complex<double> output_amplitude(const Trajectory& traj,
                                             std::size_t k) {
  return std::sqrt(traj.params.kappa) * traj.amplitudes[k] -
         oracle_detail::drive_in(traj.tones, traj.times[k]);
}

// Discrete Fourier projection of a_out at the given frame frequency over
// the post-transient record; exact when the record spans an integer
// number of periods of every beat present.
inline std::complex<double> project_output(const Trajectory& traj,
                                           double frequency) {
  const std::size_t n0 = traj.transient_cut;
  const std::size_t n = traj.times.size();
  if (n0 >= n)
    throw insufficient_record_error(
        "project_output: record has no post-transient samples");
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = n0; k < n; ++k)
    acc += output_amplitude(traj, k) *
           std::exp(std::complex<double>(0.0, frequency * traj.times[k]));
  return acc / static_cast<double>(n - n0);
}

struct ProbeGainOptions {
  double periods = 20.0;          // beat periods in the measurement window
  long samples_per_period = 64;
  double settle_time = -1.0;      // negative = 60/kappa
  double tolerance = 1e-11;
  std::optional<std::complex<double>> initial;  // skip-ahead start state
};

struct ProbeGainResult {
  double signal_gain_db = 0.0;
  double idler_gain_db = -300.0;
  std::complex<double> signal_out{0.0, 0.0};
  std::complex<double> idler_out{0.0, 0.0};
  double window = 0.0;  // s
};

namespace oracle_detail {

// Shared two-tone measurement; amplitude preconditions are enforced by
// the public wrappers.
inline ProbeGainResult two_tone_gain(const OracleParams& params,
                                     const Tone& pump, const Tone& probe,
                                     const ProbeGainOptions& opts) {
  const double beat = std::abs(probe.detuning - pump.detuning);
  if (!(beat > 0.0))
    throw std::invalid_argument(
        "probe_gain: probe and pump detunings must differ");
  if (opts.periods < 10.0)
    throw insufficient_record_error(
        "probe_gain: record must cover at least 10 beat periods, requested " +
        std::to_string(opts.periods));

  const double settle_span =
      opts.settle_time >= 0.0 ? opts.settle_time : 60.0 / params.kappa;
  const std::vector<Tone> tones{pump, probe};

  std::complex<double> a0 = opts.initial.value_or(std::complex<double>{0, 0});
  double t0 = 0.0;
  if (settle_span > 0.0) {
    IntegrateOptions pre;
    pre.tolerance = opts.tolerance;
    pre.samples = 2;
    pre.t0 = 0.0;
    pre.initial = a0;
    const Trajectory warm = integrate(params, tones, settle_span, pre);
    a0 = warm.final_amplitude;
    t0 = warm.final_time;
  }

  const double window = opts.periods * two_pi / beat;
  IntegrateOptions main;
  main.tolerance = opts.tolerance;
  main.samples = static_cast<long>(opts.periods) * opts.samples_per_period;
  main.t0 = t0;
  main.initial = a0;
  main.transient_time = 0.0;
  const Trajectory record = integrate(params, tones, window, main);

  ProbeGainResult res;
  res.window = window;
  res.signal_out = project_output(record, probe.detuning);
  res.idler_out =
      project_output(record, 2.0 * pump.detuning - probe.detuning);
  const double in_power = probe.amplitude * probe.amplitude;
  res.signal_gain_db = 10.0 * std::log10(std::norm(res.signal_out) / in_power);
  const double idler_ratio = std::norm(res.idler_out) / in_power;
  res.idler_gain_db =
      idler_ratio <= 1e-30 ? -300.0 : 10.0 * std::log10(idler_ratio);
  return res;
}

}  // namespace oracle_detail

// Small-signal gain at the probe detuning from a genuine two-tone run.
inline ProbeGainResult probe_gain(const OracleParams& params, const Tone& pump,
                                  const Tone& probe,
                                  const ProbeGainOptions& opts = {}) {
  if (probe.amplitude > 1e-3 * pump.amplitude)
    throw std::invalid_argument(
        "probe_gain: probe amplitude must stay below 1e-3 of the pump "
        "amplitude for linear response");
  return oracle_detail::two_tone_gain(params, pump, probe, opts);
}

enum class OracleCompressionStatus { Compressed, NoCompressionInRange };

struct OracleCompression {
  OracleCompressionStatus status = OracleCompressionStatus::NoCompressionInRange;
  double p1db_dbm = 0.0;
  std::vector<std::pair<double, double>> curve;  // (dBm, gain_db)
};

// Full nonlinear two-tone compression sweep; no small-probe assumption.
inline OracleCompression p1db_oracle(const OracleParams& params,
                                     const Tone& pump, double probe_detuning,
                                     std::vector<double> probe_powers_dbm,
                                     double carrier_freq,
                                     const ProbeGainOptions& opts = {}) {
  if (probe_powers_dbm.size() < 2)
    throw std::invalid_argument("p1db_oracle: need at least two probe powers");
  std::sort(probe_powers_dbm.begin(), probe_powers_dbm.end());
  if (probe_powers_dbm.back() - probe_powers_dbm.front() < 30.0)
    throw std::invalid_argument(
        "p1db_oracle: probe power range must span at least 30 dB");

  OracleCompression res;
  for (double p : probe_powers_dbm) {
    Tone probe;
    probe.amplitude = std::sqrt(flux_from_dbm(p, carrier_freq));
    probe.detuning = probe_detuning;
    probe.phase = 0.0;
    const ProbeGainResult g =
        oracle_detail::two_tone_gain(params, pump, probe, opts);
    res.curve.emplace_back(p, g.signal_gain_db);
  }
  const double target = res.curve.front().second - 1.0;
  for (std::size_t k = 1; k < res.curve.size(); ++k) {
    if (res.curve[k].second > target) continue;
    const auto [p_lo, g_lo] = res.curve[k - 1];
    const auto [p_hi, g_hi] = res.curve[k];
    res.status = OracleCompressionStatus::Compressed;
    res.p1db_dbm = p_lo + (g_lo - target) / (g_lo - g_hi) * (p_hi - p_lo);
    return res;
  }
  return res;
}

// Aligned steady two-tone record for harmonic extraction: settles first,
// then spans an exact integer number of beat periods.
inline Trajectory steady_record(const OracleParams& params,
                                const std::vector<Tone>& tones, double beat,
                                double periods, long samples_per_period = 64,
                                double settle_time = -1.0,
                                double tolerance = 1e-11) {
  if (!(beat > 0.0))
    throw std::invalid_argument("steady_record: beat must be positive");
  const double settle_span =
      settle_time >= 0.0 ? settle_time : 60.0 / params.kappa;
  IntegrateOptions pre;
  pre.tolerance = tolerance;
  pre.samples = 2;
  const Trajectory warm = integrate(params, tones, settle_span, pre);
  IntegrateOptions main;
  main.tolerance = tolerance;
  main.samples = static_cast<long>(periods) * samples_per_period;
  main.t0 = warm.final_time;
  main.initial = warm.final_amplitude;
  main.transient_time = 0.0;
  return integrate(params, tones, periods * two_pi / beat, main);
}

struct HarmonicRow {
  int m = 0;  // pump-tone order
  int k = 0;  // probe-tone order
  double frequency = 0.0;  // rad/s in the pump frame
  double power_dbc = 0.0;  // relative to the (0, 1) probe tone
};

// Intermodulation powers at m*delta_p + k*delta_s, |m|+|k| <= max_order,
// relative to the first-order probe tone.
inline std::vector<HarmonicRow> harmonic_powers(const Trajectory& record,
                                                double delta_p, double delta_s,
                                                int max_order) {
  if (max_order < 1)
    throw std::invalid_argument("harmonic_powers: max_order must be >= 1");
  const std::size_t n0 = record.transient_cut;
  const std::size_t n = record.times.size();
  if (n0 + 2 > n)
    throw insufficient_record_error(
        "harmonic_powers: record has no post-transient samples");
  const double dt = record.times[1] - record.times[0];
  const double span = (n - n0) * dt;

  struct Line {
    int m, k;
    double freq;
  };
  std::vector<Line> lines;
  double slowest = 0.0;
  for (int m = -max_order; m <= max_order; ++m)
    for (int k = -max_order; k <= max_order; ++k) {
      if (std::abs(m) + std::abs(k) > max_order) continue;
      if (m == 0 && k == 0) continue;
      const double f = m * delta_p + k * delta_s;
      bool dup = false;
      for (auto& l : lines)
        if (std::abs(l.freq - f) <= 1e-9 * (std::abs(f) + 1.0)) {
          dup = true;
          if (std::abs(m) + std::abs(k) < std::abs(l.m) + std::abs(l.k))
            l = {m, k, f};
          break;
        }
      if (!dup) lines.push_back({m, k, f});
      if (f != 0.0)
        slowest = slowest == 0.0 ? std::abs(f) : std::min(slowest, std::abs(f));
    }
  if (slowest > 0.0 && span < 20.0 * two_pi / slowest * (1.0 - 1e-9))
    throw insufficient_record_error(
        "harmonic_powers: record spans fewer than 20 periods of the slowest "
        "intermodulation tone");

  const std::complex<double> ref = project_output(record, delta_s);
  const double ref_power = std::norm(ref);
  if (ref_power <= 0.0)
    throw numerical_error(
        "harmonic_powers: first-order probe tone has zero power");

  std::vector<HarmonicRow> rows;
  rows.reserve(lines.size());
  for (const auto& l : lines) {
    const double p = std::norm(project_output(record, l.freq));
    const double dbc =
        p <= ref_power * 1e-30 ? -300.0 : 10.0 * std::log10(p / ref_power);
    rows.push_back({l.m, l.k, l.freq, dbc});
  }
  std::sort(rows.begin(), rows.end(),
            [](const HarmonicRow& x, const HarmonicRow& y) {
              return x.frequency < y.frequency;
            });
  return rows;
}

}  // namespace paramp
