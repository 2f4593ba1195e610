#pragma once

// Physical constants (CODATA 2018 exact values) and unit helpers.
// Internal convention: hbar = 1, so all energies and rates are angular
// frequencies in rad/s. SI constants appear only at the unit boundaries
// (capacitance/inductance <-> energy, dBm <-> photon flux).

namespace paramp {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double hbar_si = 1.054571817e-34;            // J s
inline constexpr double elementary_charge_si = 1.602176634e-19;  // C

// E_c = e^2 / (2 C), expressed as an angular frequency (divide by hbar).
inline constexpr double charging_energy_from_capacitance(double cap_farad) {
  return elementary_charge_si * elementary_charge_si /
         (2.0 * cap_farad * hbar_si);
}

inline constexpr double capacitance_from_charging_energy(double e_c_rad) {
  return elementary_charge_si * elementary_charge_si /
         (2.0 * e_c_rad * hbar_si);
}

// E_J = (hbar/2e)^2 / L, expressed as an angular frequency.
inline constexpr double josephson_energy_from_inductance(double l_henry) {
  return hbar_si /
         (4.0 * elementary_charge_si * elementary_charge_si * l_henry);
}

inline constexpr double inductance_from_josephson_energy(double e_j_rad) {
  return hbar_si /
         (4.0 * elementary_charge_si * elementary_charge_si * e_j_rad);
}

inline constexpr double ghz_to_rad(double f_ghz) { return f_ghz * two_pi * 1e9; }
inline constexpr double rad_to_ghz(double w_rad) { return w_rad / (two_pi * 1e9); }
inline constexpr double mhz_to_rad(double f_mhz) { return f_mhz * two_pi * 1e6; }
inline constexpr double rad_to_mhz(double w_rad) { return w_rad / (two_pi * 1e6); }

}  // namespace paramp
