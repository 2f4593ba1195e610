#pragma once

#include <stdexcept>
#include <string>

namespace paramp {

// Bad or inconsistent configuration input (file contents, missing fields).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operating point sits on or past the parametric oscillation threshold:
// the linearized scattering matrix is singular.
struct threshold_error : std::runtime_error {
  explicit threshold_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Branch selection with the Error policy hit a bistable operating point.
struct bistability_error : std::runtime_error {
  bistability_error(double low, double high, const std::string& msg)
      : std::runtime_error(msg), n_low(low), n_high(high) {}
  double n_low;
  double n_high;
};

// Time-domain integration diverged.
struct instability_error : std::runtime_error {
  instability_error(double t, const std::string& msg)
      : std::runtime_error(msg), blow_up_time(t) {}
  double blow_up_time;
};

// A measurement record is too short for the requested tone extraction.
struct insufficient_record_error : std::runtime_error {
  explicit insufficient_record_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Generic numerical failure with diagnostic text (solver breakdowns).
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace paramp
