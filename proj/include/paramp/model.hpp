#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "paramp/constants.hpp"
#include "paramp/errors.hpp"

// Domain types shared by every other header: circuit descriptions,
// environment coupling, drives, probes, validation, and the unit bridge
// between lab quantities (dBm, uA) and photon flux.

namespace paramp {

struct JunctionSpec {
  double e_j = 0.0;  // Josephson energy, rad/s
  double e_c = 0.0;  // charging energy, rad/s
  std::optional<double> l_j0;  // zero-phase Josephson inductance, H
  std::optional<double> c_j;   // junction capacitance, F

  static JunctionSpec from_energies(double e_j, double e_c) {
    return JunctionSpec{e_j, e_c, std::nullopt, std::nullopt};
  }

  static JunctionSpec from_elements(double l_j0, double c_j) {
    JunctionSpec j;
    j.e_j = josephson_energy_from_inductance(l_j0);
    j.e_c = charging_energy_from_capacitance(c_j);
    j.l_j0 = l_j0;
    j.c_j = c_j;
    return j;
  }

  double capacitance() const {
    return c_j ? *c_j : capacitance_from_charging_energy(e_c);
  }

  double inductance() const {
    return l_j0 ? *l_j0 : inductance_from_josephson_energy(e_j);
  }

  bool operator==(const JunctionSpec&) const = default;
};

struct SingleJunction {
  JunctionSpec junction;
  bool operator==(const SingleJunction&) const = default;
};

struct SeriesArray {
  long n = 1;  // junction count
  JunctionSpec junction;
  double c_ground = 0.0;  // per-node parasitic capacitance, F
  double c_out = 0.0;     // output coupling capacitance, F
  bool operator==(const SeriesArray&) const = default;
};

struct Blochnium {
  long n_quartons = 1;  // N
  long m_slaves = 1;    // M
  double alpha_c = 0.0;
  JunctionSpec slave_junction;
  double c_ground = 0.0;  // F
  bool operator==(const Blochnium&) const = default;
};

struct ModifiedBjpa {
  long n_cells = 1;
  double c_g = 0.0, c_j = 0.0, c_m = 0.0;  // F
  double c_1 = 0.0, c_2 = 0.0, c_s = 0.0;  // F
  double l_js = 0.0, l_jm = 0.0, l_s = 0.0;  // H
  double e_js = 0.0, e_jm = 0.0;  // rad/s
  long n_primary = 1;  // N per cell
  bool operator==(const ModifiedBjpa&) const = default;
};

using Architecture =
    std::variant<SingleJunction, SeriesArray, Blochnium, ModifiedBjpa>;

inline std::string architecture_name(const Architecture& arch) {
  struct V {
    std::string operator()(const SingleJunction&) { return "single_junction"; }
    std::string operator()(const SeriesArray&) { return "series_array"; }
    std::string operator()(const Blochnium&) { return "blochnium"; }
    std::string operator()(const ModifiedBjpa&) { return "modified_bjpa"; }
  };
  return std::visit(V{}, arch);
}

struct DirectKappa {
  double kappa = 0.0;  // rad/s
  bool operator==(const DirectKappa&) const = default;
};

struct QualityFactor {
  double q_eff = 0.0;
  bool operator==(const QualityFactor&) const = default;
};

struct Environment {
  std::variant<DirectKappa, QualityFactor> coupling = DirectKappa{0.0};
  double z_line = 50.0;  // ohm
  bool operator==(const Environment&) const = default;
};

struct NormalizedZeta {
  double zeta = 0.0;
  bool operator==(const NormalizedZeta&) const = default;
};

struct PhotonFlux {
  double flux = 0.0;  // photons/s
  bool operator==(const PhotonFlux&) const = default;
};

struct PowerDbm {
  double dbm = 0.0;
  bool operator==(const PowerDbm&) const = default;
};

struct CurrentMicroamp {
  double microamp = 0.0;
  std::optional<double> eta;  // transduction efficiency, dimensionless
  bool operator==(const CurrentMicroamp&) const = default;
};

struct Drive {
  double pump_freq = 0.0;   // rad/s
  double pump_phase = 0.0;  // rad
  std::variant<NormalizedZeta, PhotonFlux, PowerDbm, CurrentMicroamp> strength =
      PhotonFlux{0.0};
  bool operator==(const Drive&) const = default;
};

struct Probe {
  std::optional<double> signal_freq;  // rad/s
  std::optional<double> delta;        // normalized detuning from the pump
  double signal_power_dbm = -150.0;
  bool operator==(const Probe&) const = default;
};

enum class Severity { Pass, Warn, Fail };

struct ValidationItem {
  Severity severity = Severity::Pass;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationItem> items;

  Severity status() const {
    Severity s = Severity::Pass;
    for (const auto& it : items) {
      if (it.severity == Severity::Fail) return Severity::Fail;
      if (it.severity == Severity::Warn) s = Severity::Warn;
    }
    return s;
  }

  bool ok() const { return status() != Severity::Fail; }

  std::vector<ValidationItem> failures() const {
    std::vector<ValidationItem> out;
    for (const auto& it : items)
      if (it.severity == Severity::Fail) out.push_back(it);
    return out;
  }

  std::string summary() const {
    std::ostringstream os;
    for (const auto& it : items) {
      const char* tag = it.severity == Severity::Fail   ? "fail"
                        : it.severity == Severity::Warn ? "warn"
                                                        : "pass";
      os << tag << " " << it.field << ": " << it.message << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

inline void check_positive(ValidationReport& rep, const std::string& field,
                           double value, const char* what) {
  if (!finite_positive(value)) {
    rep.items.push_back({Severity::Fail, field,
                         std::string(what) + " must be strictly positive, got " +
                             std::to_string(value)});
  } else {
    rep.items.push_back({Severity::Pass, field, std::string(what) + " positive"});
  }
}

inline void check_junction(ValidationReport& rep, const std::string& prefix,
                           const JunctionSpec& j) {
  check_positive(rep, prefix + ".e_j", j.e_j, "Josephson energy");
  check_positive(rep, prefix + ".e_c", j.e_c, "charging energy");
  if (j.c_j) {
    if (!finite_positive(*j.c_j)) {
      rep.items.push_back({Severity::Fail, prefix + ".c_j",
                           "capacitance must be strictly positive"});
    } else if (finite_positive(j.e_c)) {
      const double derived = charging_energy_from_capacitance(*j.c_j);
      const double rel = std::abs(derived - j.e_c) / j.e_c;
      if (rel > 1e-9) {
        std::ostringstream os;
        os << "e_c and c_j disagree: e^2/2C gives " << derived
           << " rad/s vs supplied " << j.e_c << " rad/s (relative "
           << rel << ")";
        rep.items.push_back({Severity::Fail, prefix + ".c_j", os.str()});
      } else {
        rep.items.push_back(
            {Severity::Pass, prefix + ".c_j", "consistent with e_c"});
      }
    }
  }
  if (j.l_j0) {
    if (!finite_positive(*j.l_j0)) {
      rep.items.push_back({Severity::Fail, prefix + ".l_j0",
                           "inductance must be strictly positive"});
    } else if (finite_positive(j.e_j)) {
      const double derived = josephson_energy_from_inductance(*j.l_j0);
      const double rel = std::abs(derived - j.e_j) / j.e_j;
      if (rel > 1e-9) {
        std::ostringstream os;
        os << "e_j and l_j0 disagree: (hbar/2e)^2/L gives " << derived
           << " rad/s vs supplied " << j.e_j << " rad/s (relative "
           << rel << ")";
        rep.items.push_back({Severity::Fail, prefix + ".l_j0", os.str()});
      } else {
        rep.items.push_back(
            {Severity::Pass, prefix + ".l_j0", "consistent with e_j"});
      }
    }
  }
}

}  // namespace detail

// Total over all inputs: always returns a report listing every violated
// invariant, never throws and never stops at the first failure.
inline ValidationReport validate(const Architecture& arch,
                                 const Environment& env, const Drive& drive) {
  ValidationReport rep;

  struct ArchV {
    ValidationReport& rep;
    void operator()(const SingleJunction& a) {
      detail::check_junction(rep, "architecture.junction", a.junction);
    }
    void operator()(const SeriesArray& a) {
      if (a.n < 1)
        rep.items.push_back({Severity::Fail, "architecture.n",
                             "junction count must be at least 1"});
      detail::check_junction(rep, "architecture.junction", a.junction);
      detail::check_positive(rep, "architecture.c_ground", a.c_ground,
                             "capacitance");
      detail::check_positive(rep, "architecture.c_out", a.c_out, "capacitance");
    }
    void operator()(const Blochnium& a) {
      if (a.n_quartons < 1)
        rep.items.push_back({Severity::Fail, "architecture.n_quartons",
                             "Quarton count must be at least 1"});
      if (a.m_slaves < 1)
        rep.items.push_back({Severity::Fail, "architecture.m_slaves",
                             "slave count must be at least 1"});
      if (!(std::isfinite(a.alpha_c) && a.alpha_c >= 0.0))
        rep.items.push_back({Severity::Fail, "architecture.alpha_c",
                             "alpha_c must be finite and nonnegative"});
      else if (a.alpha_c == 1.0)
        rep.items.push_back({Severity::Warn, "architecture.alpha_c",
                             "Kerr coefficient is zero at alpha_c = 1; gain "
                             "vanishes"});
      detail::check_junction(rep, "architecture.slave_junction",
                             a.slave_junction);
      detail::check_positive(rep, "architecture.c_ground", a.c_ground,
                             "capacitance");
    }
    void operator()(const ModifiedBjpa& a) {
      if (a.n_cells < 1)
        rep.items.push_back({Severity::Fail, "architecture.n_cells",
                             "cell count must be at least 1"});
      if (a.n_primary < 1)
        rep.items.push_back({Severity::Fail, "architecture.n_primary",
                             "primary count must be at least 1"});
      detail::check_positive(rep, "architecture.c_g", a.c_g, "capacitance");
      detail::check_positive(rep, "architecture.c_j", a.c_j, "capacitance");
      detail::check_positive(rep, "architecture.c_m", a.c_m, "capacitance");
      detail::check_positive(rep, "architecture.c_1", a.c_1, "capacitance");
      detail::check_positive(rep, "architecture.c_2", a.c_2, "capacitance");
      detail::check_positive(rep, "architecture.c_s", a.c_s, "capacitance");
      detail::check_positive(rep, "architecture.l_js", a.l_js, "inductance");
      detail::check_positive(rep, "architecture.l_jm", a.l_jm, "inductance");
      detail::check_positive(rep, "architecture.l_s", a.l_s, "inductance");
      detail::check_positive(rep, "architecture.e_js", a.e_js,
                             "Josephson energy");
      detail::check_positive(rep, "architecture.e_jm", a.e_jm,
                             "Josephson energy");
    }
  };
  std::visit(ArchV{rep}, arch);

  struct EnvV {
    ValidationReport& rep;
    void operator()(const DirectKappa& c) {
      detail::check_positive(rep, "environment.coupling.kappa", c.kappa,
                             "coupling rate");
    }
    void operator()(const QualityFactor& c) {
      detail::check_positive(rep, "environment.coupling.q_eff", c.q_eff,
                             "quality factor");
    }
  };
  std::visit(EnvV{rep}, env.coupling);
  detail::check_positive(rep, "environment.z_line", env.z_line,
                         "line impedance");

  detail::check_positive(rep, "drive.pump_freq", drive.pump_freq,
                         "pump frequency");
  struct DriveV {
    ValidationReport& rep;
    void operator()(const NormalizedZeta& s) {
      if (!std::isfinite(s.zeta))
        rep.items.push_back(
            {Severity::Fail, "drive.strength.normalized_zeta", "must be finite"});
    }
    void operator()(const PhotonFlux& s) {
      if (!(std::isfinite(s.flux) && s.flux >= 0.0))
        rep.items.push_back({Severity::Fail, "drive.strength.photon_flux",
                             "photon flux must be finite and nonnegative"});
    }
    void operator()(const PowerDbm& s) {
      if (!std::isfinite(s.dbm))
        rep.items.push_back(
            {Severity::Fail, "drive.strength.power_dbm", "must be finite"});
    }
    void operator()(const CurrentMicroamp& s) {
      if (!(std::isfinite(s.microamp) && s.microamp >= 0.0))
        rep.items.push_back({Severity::Fail, "drive.strength.current_ua",
                             "current must be finite and nonnegative"});
      if (s.eta && !(std::isfinite(*s.eta) && *s.eta > 0.0))
        rep.items.push_back({Severity::Fail, "drive.strength.eta",
                             "transduction efficiency must be positive"});
    }
  };
  std::visit(DriveV{rep}, drive.strength);

  return rep;
}

// dBm carried by a carrier at angular frequency w -> photon flux (1/s).
inline double flux_from_dbm(double power_dbm, double carrier_freq) {
  const double watts = std::pow(10.0, power_dbm / 10.0) * 1e-3;
  return watts / (hbar_si * carrier_freq);
}

inline double dbm_from_flux(double flux, double carrier_freq) {
  const double watts = flux * hbar_si * carrier_freq;
  return 10.0 * std::log10(watts / 1e-3);
}

struct ResolvedDrive {
  std::optional<double> flux;  // photons/s; absent for normalized drives
  std::optional<double> zeta;  // present only for NormalizedZeta
};

// Unit bridge from any drive strength to photon flux at the carrier.
// NormalizedZeta passes through with flux marked not-applicable.
inline ResolvedDrive drive_to_flux(const Drive& drive, const Environment& env,
                                   double carrier_freq) {
  if (!(carrier_freq > 0.0))
    throw std::invalid_argument("drive_to_flux: carrier_freq must be positive");

  struct V {
    const Environment& env;
    double carrier;
    ResolvedDrive operator()(const NormalizedZeta& s) {
      return {std::nullopt, s.zeta};
    }
    ResolvedDrive operator()(const PhotonFlux& s) {
      return {s.flux, std::nullopt};
    }
    ResolvedDrive operator()(const PowerDbm& s) {
      return {flux_from_dbm(s.dbm, carrier), std::nullopt};
    }
    ResolvedDrive operator()(const CurrentMicroamp& s) {
      if (!s.eta)
        throw config_error(
            "drive.strength.eta: transduction efficiency required for "
            "current drives");
      const double amps = s.microamp * 1e-6;
      const double watts = 0.5 * amps * amps * env.z_line * (*s.eta);
      return {watts / (hbar_si * carrier), std::nullopt};
    }
  };
  return std::visit(V{env, carrier_freq}, drive.strength);
}

}  // namespace paramp
