#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include <paramp/constants.hpp>
#include <paramp/nonlinearity.hpp>

using namespace paramp;

TEST_CASE("bare frequency of the junction oscillator") {
  const double x = ghz_to_rad(1.7);
  CHECK(bare_frequency(JunctionSpec::from_energies(x, x)) ==
        Catch::Approx(std::sqrt(8.0) * x).epsilon(1e-15));
  CHECK(bare_frequency(JunctionSpec::from_energies(2.0 * x, x)) ==
        Catch::Approx(4.0 * x).epsilon(1e-15));
  // Quadrupling the Josephson energy doubles the frequency.
  const auto j1 = JunctionSpec::from_energies(x, 0.3 * x);
  const auto j4 = JunctionSpec::from_energies(4.0 * x, 0.3 * x);
  CHECK(bare_frequency(j4) == Catch::Approx(2.0 * bare_frequency(j1)).epsilon(1e-15));
  // Reference point: e_j = 22.5 GHz, e_c = 0.2 GHz -> sqrt(8*4.5) = 6 GHz.
  CHECK(rad_to_ghz(bare_frequency(
            JunctionSpec::from_energies(ghz_to_rad(22.5), ghz_to_rad(0.2)))) ==
        Catch::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("Kerr coefficients per architecture") {
  const double ec = ghz_to_rad(0.25);
  const auto j = JunctionSpec::from_energies(ghz_to_rad(30.0), ec);

  const auto single = kerr_coefficient(Architecture{SingleJunction{j}});
  CHECK(single.kerr == -ec / 2.0);
  CHECK(single.sign_convention == KerrConvention::SingleJunctionLambda);

  const auto arr = kerr_coefficient(Architecture{SeriesArray{40, j, 1e-16, 1e-13}});
  CHECK(arr.kerr == ec / (3.0 * 40.0));
  CHECK(arr.sign_convention == KerrConvention::ArrayK);

  const auto bloch =
      kerr_coefficient(Architecture{Blochnium{70, 8, 0.1, j, 1e-16}});
  CHECK(bloch.kerr == -ec * (1.0 - 0.1) / (6.0 * 70.0 * 8.0));
  CHECK(bloch.kerr == Catch::Approx(-ec * 2.6786e-4).epsilon(1e-4));
  CHECK(bloch.sign_convention == KerrConvention::BlochniumK);

  const auto flat = kerr_coefficient(Architecture{Blochnium{70, 8, 1.0, j, 1e-16}});
  CHECK(flat.kerr == 0.0);
}

TEST_CASE("Kerr formulas are exact over randomized parameters") {
  std::mt19937_64 rng(7151);
  std::uniform_real_distribution<double> uec(0.05, 2.0);
  std::uniform_int_distribution<long> un(1, 500);
  std::uniform_real_distribution<double> ua(0.0, 0.99);
  for (int t = 0; t < 200; ++t) {
    const double ec = ghz_to_rad(uec(rng));
    const auto j = JunctionSpec::from_energies(ghz_to_rad(20.0), ec);
    const long n = un(rng);
    const long m = un(rng);
    const double ac = ua(rng);
    const auto arr = kerr_coefficient(Architecture{SeriesArray{n, j, 1e-16, 1e-13}});
    CHECK(arr.kerr == ec / (3.0 * static_cast<double>(n)));
    const auto bloch =
        kerr_coefficient(Architecture{Blochnium{n, m, ac, j, 1e-16}});
    CHECK(bloch.kerr ==
          -ec * (1.0 - ac) /
              (6.0 * static_cast<double>(n) * static_cast<double>(m)));
  }
}

TEST_CASE("single-Quarton chain carries half the plain-array magnitude") {
  const double ec = ghz_to_rad(0.4);
  const auto j = JunctionSpec::from_energies(ghz_to_rad(30.0), ec);
  for (long n : {1L, 7L, 64L}) {
    const auto arr = kerr_coefficient(Architecture{SeriesArray{n, j, 1e-16, 1e-13}});
    const auto bloch = kerr_coefficient(Architecture{Blochnium{n, 1, 0.0, j, 1e-16}});
    CHECK(std::abs(bloch.kerr) == Catch::Approx(std::abs(arr.kerr) / 2.0).epsilon(1e-15));
  }
}

TEST_CASE("Kerr magnitude dilutes with chain length and slave count") {
  const auto j = JunctionSpec::from_energies(ghz_to_rad(30.0), ghz_to_rad(0.4));
  double prev = 1e99;
  for (long n : {1L, 2L, 5L, 20L, 100L, 400L}) {
    const double k =
        std::abs(kerr_coefficient(Architecture{Blochnium{n, 8, 0.1, j, 1e-16}}).kerr);
    CHECK(k < prev);
    prev = k;
  }
  prev = 1e99;
  for (long m : {1L, 2L, 4L, 16L, 64L}) {
    const double k =
        std::abs(kerr_coefficient(Architecture{Blochnium{70, m, 0.1, j, 1e-16}}).kerr);
    CHECK(k < prev);
    prev = k;
  }
  prev = 1e99;
  for (long n : {1L, 3L, 10L, 50L}) {
    const double k =
        std::abs(kerr_coefficient(Architecture{SeriesArray{n, j, 1e-16, 1e-13}}).kerr);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("modified cell reuses the Quarton dilution formula") {
  ModifiedBjpa a;
  a.n_cells = 2;
  a.c_j = 40e-15;
  a.c_g = 1e-16;
  a.c_m = 9e-15;
  a.c_1 = 70e-15;
  a.c_2 = 110e-15;
  a.c_s = 25e-15;
  a.l_js = 55e-12;
  a.l_jm = 110e-12;
  a.l_s = 180e-12;
  a.e_js = josephson_energy_from_inductance(a.l_js);
  a.e_jm = josephson_energy_from_inductance(a.l_jm);
  a.n_primary = 3;
  const auto k = kerr_coefficient(Architecture{a});
  const double ec = charging_energy_from_capacitance(a.c_j);
  const double alpha = 4.0 * (a.e_jm / a.e_js);
  const double expected = -ec * (1.0 - alpha) / (6.0 * 6.0 * 4.0);
  CHECK(k.kerr == expected);
  // Bridge junctions four times weaker than chain junctions balance the
  // quartic term away entirely.
  ModifiedBjpa flat = a;
  flat.l_jm = 4.0 * flat.l_js;
  flat.e_jm = josephson_energy_from_inductance(flat.l_jm);
  CHECK(kerr_coefficient(Architecture{flat}).kerr == 0.0);
}

TEST_CASE("flux-tuned inductance") {
  CHECK(tuned_inductance(1.1e-9, 0.0) == 1.1e-9);
  CHECK(tuned_inductance(1.1e-9, pi / 3.0) == Catch::Approx(2.2e-9).epsilon(1e-12));
  CHECK(tuned_inductance(1.1e-9, -pi / 3.0) == Catch::Approx(2.2e-9).epsilon(1e-12));
  double prev = 0.0;
  for (double phase = 0.0; phase < 1.5; phase += 0.1) {
    const double l = tuned_inductance(1.0e-9, phase);
    CHECK(l > prev);
    prev = l;
  }
  CHECK_THROWS_AS(tuned_inductance(1.0e-9, pi / 2.0), std::domain_error);
  CHECK_THROWS_AS(tuned_inductance(1.0e-9, 2.0), std::domain_error);
}

TEST_CASE("displaced frame around the pump condensate") {
  const auto j = JunctionSpec::from_energies(ghz_to_rad(22.5), ghz_to_rad(0.2));
  const double w0 = bare_frequency(j);
  const double wp = ghz_to_rad(6.1);

  const auto off = displaced_frame({0.0, 0.0}, j, wp);
  CHECK(off.delta0 == Catch::Approx(w0 - wp).epsilon(1e-12));
  CHECK(std::abs(off.lambda1) == 0.0);

  // Negative Kerr pulls the dressed resonance down.
  const auto on = displaced_frame({2.0, 0.0}, j, w0);
  CHECK(on.delta0 < 0.0);

  const auto unit = displaced_frame({1.0, 0.0}, j, wp);
  CHECK(unit.lambda1.real() == Catch::Approx(-j.e_c).epsilon(1e-12));
  CHECK(unit.lambda1.imag() == 0.0);
}

TEST_CASE("pump strength magnitude and phase follow the condensate") {
  const auto j = JunctionSpec::from_energies(ghz_to_rad(22.5), ghz_to_rad(0.2));
  std::mt19937_64 rng(40921);
  std::uniform_real_distribution<double> umag(0.1, 40.0);
  std::uniform_real_distribution<double> uph(-pi, pi);
  for (int t = 0; t < 100; ++t) {
    const double mag = umag(rng);
    const double ph = uph(rng);
    const std::complex<double> alpha = std::polar(mag, ph);
    const auto f = displaced_frame(alpha, j, ghz_to_rad(6.0));
    CHECK(std::abs(f.lambda1) ==
          Catch::Approx(2.0 * mag * mag * (j.e_c / 2.0)).epsilon(1e-12));
    // arg(lambda1) = 2 arg(alpha) + arg(Lambda); Lambda < 0 contributes pi.
    const double expected =
        std::remainder(2.0 * ph + pi, 2.0 * pi);
    CHECK(std::remainder(std::arg(f.lambda1) - expected, 2.0 * pi) ==
          Catch::Approx(0.0).margin(1e-12));
  }
}
