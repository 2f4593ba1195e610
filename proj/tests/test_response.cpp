#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <paramp/constants.hpp>
#include <paramp/errors.hpp>
#include <paramp/nonlinearity.hpp>
#include <paramp/pump.hpp>
#include <paramp/response.hpp>

using namespace paramp;

namespace {

PumpOperatingPoint op_at(double delta, double zeta, double n, double phase) {
  PumpOperatingPoint op;
  op.delta = delta;
  op.zeta = zeta;
  op.n = n;
  op.phase = phase;
  op.stability = Stability::Stable;
  return op;
}

// Random stable operating points drawn from genuine steady states.
std::vector<PumpOperatingPoint> random_stable(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  std::uniform_real_distribution<double> uz(-0.55, 0.55);
  std::uniform_real_distribution<double> uph(-pi, pi);
  std::vector<PumpOperatingPoint> out;
  while (static_cast<int>(out.size()) < count) {
    const auto pts = steady_state(ud(rng), uz(rng), uph(rng));
    for (const auto& p : pts) {
      if (p.stability != Stability::Stable) continue;
      // Keep clear of the oscillation threshold so gains stay finite.
      const double zn = p.zeta * p.n;
      const double c = (p.delta - 2.0 * zn) * (p.delta - 2.0 * zn) + 0.25 -
                       zn * zn;
      if (c < 0.02) continue;
      out.push_back(p);
      break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pump-off scattering is the identity") {
  const auto s = scattering(op_at(0.0, 0.0, 4.0, 0.0), 0.0);
  CHECK(std::abs(s.s11 - 1.0) < 1e-14);
  CHECK(std::abs(s.s12) < 1e-14);
  CHECK(std::abs(s.s21) < 1e-14);
  CHECK(std::abs(s.s22 - 1.0) < 1e-14);
}

TEST_CASE("worked two-mode inversion example") {
  // delta = D = 0, zeta n = 1/4, phase 0: det M = 1/4 + 3/16 = 0.4375,
  // s11 = (0.5 - 0.5i)/0.4375 - 1 = 1/7 - (8/7)i.
  const auto s = scattering(op_at(0.0, 0.25, 1.0, 0.0), 0.0);
  CHECK(s.det_abs == Catch::Approx(0.4375).epsilon(1e-12));
  CHECK(s.s11.real() == Catch::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(s.s11.imag() == Catch::Approx(-8.0 / 7.0).epsilon(1e-12));
  CHECK(std::norm(s.s11) == Catch::Approx(65.0 / 49.0).epsilon(1e-12));
  CHECK(power_db(s.s11) == Catch::Approx(10.0 * std::log10(65.0 / 49.0)).epsilon(1e-9));
}

TEST_CASE("single-junction engine limits") {
  const double kappa = mhz_to_rad(30.0);
  DisplacedFrame quiet;
  quiet.delta0 = 0.0;
  quiet.lambda1 = {0.0, 0.0};
  const auto s0 = single_jj_scattering(quiet, kappa, 0.0);
  CHECK(std::abs(s0.s11 - 1.0) < 1e-12);
  CHECK(std::abs(s0.s12) < 1e-12);

  // Pump off: all-pass phase response at any detuning.
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uf(-5.0, 5.0);
  for (int t = 0; t < 50; ++t) {
    DisplacedFrame f;
    f.delta0 = uf(rng) * kappa;
    const auto s = single_jj_scattering(f, kappa, uf(rng) * kappa);
    CHECK(std::abs(std::abs(s.s11) - 1.0) < 1e-12);
    CHECK(std::abs(s.s12) < 1e-12);
  }
}

TEST_CASE("single-junction closed-form magnitude") {
  // Delta0 = 0, |lambda1| = 0.4 kappa, omega = 0:
  // |s11| = (1/4 + 0.16)/(1/4 - 0.16) = 0.41/0.09.
  const double kappa = mhz_to_rad(30.0);
  DisplacedFrame f;
  f.delta0 = 0.0;
  f.lambda1 = std::polar(0.4 * kappa, 0.83);
  const auto s = single_jj_scattering(f, kappa, 0.0);
  const double expected = 0.41 / 0.09;
  CHECK(std::abs(s.s11) == Catch::Approx(expected).epsilon(1e-10));
  CHECK(std::norm(s.s11) == Catch::Approx(20.7531).epsilon(1e-4));
  CHECK(power_db(s.s11) == Catch::Approx(13.172).margin(5e-3));
}

TEST_CASE("symplectic identity holds on random stable points") {
  const auto ops = random_stable(300, 424242);
  const double kappa = mhz_to_rad(25.0);
  for (const auto& op : ops) {
    for (double d : {-2.0, -1.3, -0.7, -0.2, 0.0, 0.2, 0.7, 1.3, 2.0}) {
      const auto s = scattering(op, d);
      CHECK(std::abs(std::norm(s.s11) - std::norm(s.s12) - 1.0) < 1e-9);
      // Same identity through the physical-rate engine.
      const auto map = normalized_to_single_jj(op, d, kappa);
      const auto sj = single_jj_scattering(map.frame, kappa, map.omega);
      CHECK(std::abs(std::norm(sj.s11) - std::norm(sj.s12) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("normalized and single-junction engines agree through the map") {
  const auto ops = random_stable(200, 31337);
  const double kappa = mhz_to_rad(40.0);
  for (const auto& op : ops) {
    for (double d : {-1.5, -0.4, 0.0, 0.6, 1.8}) {
      const auto a = scattering(op, d);
      const auto map = normalized_to_single_jj(op, d, kappa);
      const auto b = single_jj_scattering(map.frame, kappa, map.omega);
      CHECK(std::abs(std::abs(a.s11) - std::abs(b.s11)) < 1e-9);
      CHECK(std::abs(std::abs(a.s12) - std::abs(b.s12)) < 1e-9);
    }
  }
}

TEST_CASE("pump phase covariance") {
  const auto base = op_at(-0.7, -0.12, 2.1, 0.0);
  for (double theta : {0.3, 1.1, -2.4}) {
    auto shifted = base;
    shifted.phase = base.phase + theta;
    for (double d : {-0.8, 0.0, 0.5}) {
      const auto s0 = scattering(base, d);
      const auto s1 = scattering(shifted, d);
      CHECK(std::abs(s1.s11) == Catch::Approx(std::abs(s0.s11)).epsilon(1e-12));
      CHECK(std::abs(s1.s12) == Catch::Approx(std::abs(s0.s12)).epsilon(1e-12));
      const double darg =
          std::remainder(std::arg(s1.s12) - std::arg(s0.s12) - 2.0 * theta,
                         two_pi);
      CHECK(std::abs(darg) < 1e-12);
    }
  }
}

TEST_CASE("zero-pump-detuning response is frequency symmetric") {
  const auto pts = steady_state(0.0, -0.2);
  const auto op = select_branch(pts, BranchPolicy::LowBranch);
  for (double d : {0.1, 0.35, 0.8, 1.6, 2.5}) {
    const auto sp = scattering(op, d);
    const auto sm = scattering(op, -d);
    CHECK(std::abs(sp.s11) == Catch::Approx(std::abs(sm.s11)).epsilon(1e-12));
  }
}

TEST_CASE("threshold detection raises a dedicated error") {
  // zeta n = 1, delta = 2 - sqrt(3)/2 puts det M at zero for D = 0.
  const auto op = op_at(2.0 - std::sqrt(3.0) / 2.0, 0.5, 2.0, 0.0);
  CHECK_THROWS_AS(scattering(op, 0.0), threshold_error);

  DisplacedFrame f;
  f.delta0 = 0.0;
  const double kappa = mhz_to_rad(30.0);
  f.lambda1 = {kappa / 2.0, 0.0};
  CHECK_THROWS_AS(single_jj_scattering(f, kappa, 0.0), threshold_error);
}

TEST_CASE("gain spectrum basics") {
  // Linear limit: flat 0 dB, idler at the floor.
  const auto quiet = select_branch(steady_state(0.4, 0.0), BranchPolicy::LowBranch);
  const auto flat = gain_spectrum(quiet, -2.0, 2.0, 41);
  REQUIRE(flat.points.size() == 41);
  for (const auto& p : flat.points) {
    CHECK(std::abs(p.signal_gain_db) < 1e-11);
    CHECK(p.idler_gain_db == -300.0);
  }

  // Amplifying point: curve maximum coincides with the argmin of |det M|.
  const auto op = select_branch(steady_state(-0.6, -0.125), BranchPolicy::LowBranch);
  const auto curve = gain_spectrum(op, -3.0, 3.0, 1201);
  std::size_t best = 0, best_det = 0;
  double det_min = 1e300;
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    if (curve.points[k].signal_gain_db > curve.points[best].signal_gain_db)
      best = k;
    const auto s = scattering(op, curve.points[k].x);
    if (s.det_abs < det_min) {
      det_min = s.det_abs;
      best_det = k;
    }
  }
  CHECK(best == best_det);
  CHECK(curve.points[best].signal_gain_db > 3.0);
  CHECK(curve.x_label == "delta");

  // Every point respects the symplectic floor.
  for (const auto& p : curve.points)
    CHECK(p.signal_gain_db >= 0.0);

  auto unstable = op;
  unstable.stability = Stability::Unstable;
  CHECK_THROWS_AS(gain_spectrum(unstable, -1.0, 1.0, 11), threshold_error);
  CHECK_THROWS_AS(gain_spectrum(op, -1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("pump-off reflection trace") {
  const double w0 = ghz_to_rad(6.0);
  const double kappa = mhz_to_rad(30.0);
  const auto trace =
      linear_response(w0, kappa, w0 - 40.0 * kappa, w0 + 40.0 * kappa, 4001);
  REQUIRE(trace.size() == 4001);
  for (const auto& p : trace)
    CHECK(p.magnitude == Catch::Approx(1.0).epsilon(1e-12));
  // Far detuned: phase near zero; on resonance: phase flips through pi.
  CHECK(std::abs(trace.front().phase) < 0.1);
  CHECK(std::abs(trace.back().phase) < 0.1);
  const auto& mid = trace[2000];
  CHECK(std::abs(std::abs(mid.phase) - pi) < 1e-6);
}

TEST_CASE("phase winding across a resonance is 2 pi") {
  // The phase derivative is a Lorentzian whose tails fall off as
  // kappa/detuning, so the window must extend to ~1e7 kappa for the
  // missing tail (about 2 kappa/W) to drop below the tolerance.  Dense
  // sampling is only needed near resonance where the phase moves fast.
  const double w0 = ghz_to_rad(6.0);
  const double kappa = mhz_to_rad(30.0);
  auto winding_of = [](const std::vector<ReflectionPoint>& seg) {
    double w = 0.0;
    for (std::size_t k = 1; k < seg.size(); ++k)
      w += std::remainder(seg[k].phase - seg[k - 1].phase, two_pi);
    return w;
  };
  const double wide = 1e7 * kappa;
  const double near = 100.0 * kappa;
  double winding = 0.0;
  winding += winding_of(linear_response(w0, kappa, w0 - wide, w0 - near, 20001));
  winding += winding_of(linear_response(w0, kappa, w0 - near, w0 + near, 100001));
  winding += winding_of(linear_response(w0, kappa, w0 + near, w0 + wide, 20001));
  CHECK(std::abs(std::abs(winding) - two_pi) < 1e-6);
}

TEST_CASE("compression curve and its 1 dB crossing") {
  // Monostable detuning line: |delta| < sqrt(3)/2 never bifurcates, so
  // the total-drive model stays single valued at every signal power.
  const double delta = -0.6;
  const double zeta_pump = -0.17;
  auto zeta_signal = [&](double p_dbm) {
    return zeta_pump * std::pow(10.0, (p_dbm + 20.0) / 10.0);
  };

  const auto res =
      compression_curve(delta, zeta_pump, 0.0, 0.3, zeta_signal, -70.0, -10.0,
                        121, BranchPolicy::LowBranch);
  REQUIRE(res.status == CompressionStatus::Compressed);
  REQUIRE(res.curve.size() == 121);
  CHECK(res.reference_gain_db > 3.0);

  // Monotone non-increasing beyond the curve maximum.
  std::size_t peak = 0;
  for (std::size_t k = 0; k < res.curve.size(); ++k)
    if (res.curve[k].gain_db > res.curve[peak].gain_db) peak = k;
  for (std::size_t k = peak + 1; k < res.curve.size(); ++k)
    CHECK(res.curve[k].gain_db <= res.curve[k - 1].gain_db + 1e-9);

  // The reported crossing reproduces gain = G0 - 1 dB and is stable
  // across repeated evaluation (deterministic bisection).
  const auto res2 =
      compression_curve(delta, zeta_pump, 0.0, 0.3, zeta_signal, -70.0, -10.0,
                        121, BranchPolicy::LowBranch);
  CHECK(res.p1db_dbm == res2.p1db_dbm);
  const double ztot = zeta_pump + zeta_signal(res.p1db_dbm);
  const auto op = select_branch(steady_state(delta, ztot), BranchPolicy::LowBranch);
  const double g = power_db(scattering(op, 0.3).s11);
  CHECK(g == Catch::Approx(res.reference_gain_db - 1.0).margin(0.02));

  // No pump: nothing to compress.
  const auto none = compression_curve(delta, 0.0, 0.0, 0.3,
                                      [](double) { return 0.0; }, -70.0, -10.0,
                                      31, BranchPolicy::LowBranch);
  CHECK(none.status == CompressionStatus::NoCompressionInRange);
  for (const auto& p : none.curve) CHECK(std::abs(p.gain_db) < 1e-11);
}

TEST_CASE("drive sweep flags bistable entries") {
  const double delta = -1.2;
  auto zeta_of = [](double v) { return v; };
  const std::vector<double> drives{0.0, -0.05, -0.35};

  const auto entries = pump_drive_sweep(drives, delta, 0.0, zeta_of, -2.0, 2.0,
                                        201, BranchPolicy::LowBranch);
  REQUIRE(entries.size() == 3);

  CHECK(entries[0].status == "ok");
  REQUIRE(entries[0].curve.has_value());
  for (const auto& p : entries[0].curve->points)
    CHECK(std::abs(p.signal_gain_db) < 1e-11);

  CHECK(entries[1].status == "ok");
  CHECK_FALSE(entries[1].bistable);

  CHECK(entries[2].bistable);
  CHECK(entries[2].status == "bistable");
  REQUIRE(entries[2].curve.has_value());

  // The Error policy reports instead of silently resolving.
  const auto strict = pump_drive_sweep(drives, delta, 0.0, zeta_of, -2.0, 2.0,
                                       201, BranchPolicy::Error);
  CHECK(strict[2].status.rfind("bistable:", 0) == 0);
  CHECK_FALSE(strict[2].curve.has_value());

  // Below bifurcation, more drive means more peak gain.
  const auto grow = pump_drive_sweep({-0.02, -0.05}, delta, 0.0, zeta_of, -3.0,
                                     3.0, 601, BranchPolicy::LowBranch);
  auto peak = [](const GainCurve& c) {
    double best = -1e300;
    for (const auto& p : c.points) best = std::max(best, p.signal_gain_db);
    return best;
  };
  REQUIRE(grow[0].curve.has_value());
  REQUIRE(grow[1].curve.has_value());
  CHECK(peak(*grow[1].curve) > peak(*grow[0].curve));
}
