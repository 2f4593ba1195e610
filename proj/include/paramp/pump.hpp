#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "paramp/errors.hpp"
#include "paramp/nonlinearity.hpp"

// Steady-state pump dynamics in normalized variables:
//   delta = (w_p - w_eff)/kappa,   zeta = K |alpha_in|^2 / kappa^2,
//   n = photon number scaled so the steady state obeys
//   zeta^2 n^3 - 2 delta zeta n^2 + (delta^2 + 1/4) n - 1 = 0.

namespace paramp {

enum class Stability { Stable, Unstable };

struct PumpOperatingPoint {
  double delta = 0.0;
  double zeta = 0.0;
  double n = 0.0;
  double phase = 0.0;  // rad
  Stability stability = Stability::Stable;
  int branch = 0;  // index among coexisting roots, ascending in n
};

inline std::pair<double, double> normalize(const KerrSpec& kerr, double kappa,
                                           double pump_flux, double pump_freq,
                                           double omega_eff) {
  if (!(kappa > 0.0)) throw std::invalid_argument("normalize: kappa must be positive");
  const double delta = (pump_freq - omega_eff) / kappa;
  const double zeta = kerr.kerr * pump_flux / (kappa * kappa);
  return {delta, zeta};
}

namespace detail {

inline double cubic_value(double delta, double zeta, double n) {
  return ((zeta * zeta * n - 2.0 * delta * zeta) * n + (delta * delta + 0.25)) *
             n -
         1.0;
}

inline double cubic_derivative(double delta, double zeta, double n) {
  return 3.0 * zeta * zeta * n * n - 4.0 * delta * zeta * n + delta * delta +
         0.25;
}

// Discriminant of a n^3 + b n^2 + c n + d; positive means three distinct
// real roots.
inline double steady_state_discriminant(double delta, double zeta) {
  const double a = zeta * zeta;
  const double b = -2.0 * delta * zeta;
  const double c = delta * delta + 0.25;
  const double d = -1.0;
  return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
         4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

inline std::vector<double> solve_steady_cubic(double delta, double zeta) {
  const double a = zeta * zeta;
  const double b = -2.0 * delta * zeta;
  const double c = delta * delta + 0.25;
  const double d = -1.0;

  // Depressed form t^3 + p t + q with n = t - b/(3a).
  const double shift = -b / (3.0 * a);
  const double p = (3.0 * a * c - b * b) / (3.0 * a * a);
  const double q =
      (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) /
      (27.0 * a * a * a);

  std::vector<double> roots;
  const double disc_t = -4.0 * p * p * p - 27.0 * q * q;
  if (disc_t > 0.0) {
    // Three real roots, trigonometric form (p < 0 here).
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg =
        std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(shift + r * std::cos(theta - two_pi * k / 3.0));
  } else {
    // One real root, Cardano with the sign-stable branch.
    const double half_q = q / 2.0;
    const double s = std::sqrt(std::max(0.0, half_q * half_q + std::pow(p / 3.0, 3)));
    const double u = std::cbrt(-half_q + s);
    const double v = std::cbrt(-half_q - s);
    roots.push_back(shift + u + v);
  }

  // Newton polish against the original cubic; fall back to bisection
  // steps when the derivative degenerates near multiple roots.
  for (double& n : roots) {
    for (int iter = 0; iter < 60; ++iter) {
      const double f = cubic_value(delta, zeta, n);
      if (std::abs(f) <= 1e-12) break;
      const double df = cubic_derivative(delta, zeta, n);
      if (df == 0.0) break;
      const double step = f / df;
      if (!std::isfinite(step) || std::abs(step) > 0.5 * std::abs(n) + 1.0)
        break;
      n -= step;
    }
  }
  std::sort(roots.begin(), roots.end());
  // Drop duplicates produced at exact degeneracies and nonphysical roots.
  std::vector<double> out;
  for (double n : roots) {
    if (!(n > 0.0)) continue;
    if (!out.empty() && std::abs(n - out.back()) <= 1e-12 * std::abs(n))
      continue;
    out.push_back(n);
  }
  return out;
}

// Linearized drift around a steady state is stable iff
// (delta - 2 zeta n)^2 + 1/4 - (zeta n)^2 > 0.
inline bool drift_stable(double delta, double zeta, double n) {
  const double zn = zeta * n;
  const double shifted = delta - 2.0 * zn;
  return shifted * shifted + 0.25 - zn * zn > 0.0;
}

}  // namespace detail

// All positive steady-state roots for the normalized pump cubic,
// ascending in n, with stability from the linearized drift spectrum and
// the intracavity phase from the steady-state relation.
inline std::vector<PumpOperatingPoint> steady_state(double delta, double zeta,
                                                    double pump_phase = 0.0) {
  std::vector<double> roots;
  if (zeta == 0.0) {
    roots.push_back(1.0 / (delta * delta + 0.25));
  } else {
    roots = detail::solve_steady_cubic(delta, zeta);
  }
  std::vector<PumpOperatingPoint> points;
  int branch = 0;
  for (double n : roots) {
    PumpOperatingPoint op;
    op.delta = delta;
    op.zeta = zeta;
    op.n = n;
    op.phase = pump_phase - std::atan2(zeta * n - delta, 0.5);
    op.stability = detail::drift_stable(delta, zeta, n) ? Stability::Stable
                                                        : Stability::Unstable;
    op.branch = branch++;
    points.push_back(op);
  }
  if (points.size() == 3) points[1].stability = Stability::Unstable;
  return points;
}

inline double steady_state_residual(const PumpOperatingPoint& op) {
  if (op.zeta == 0.0)
    return std::abs((op.delta * op.delta + 0.25) * op.n - 1.0);
  return std::abs(detail::cubic_value(op.delta, op.zeta, op.n));
}

inline bool is_bistable(double delta, double zeta) {
  if (zeta == 0.0) return false;
  return detail::steady_state_discriminant(delta, zeta) > 0.0;
}

struct BistabilityScan {
  std::vector<std::pair<double, double>> boundary;  // bistable edge points
  std::optional<std::pair<double, double>> cusp;    // minimal-|zeta| bistable
  long bistable_count = 0;
  long grid_delta = 0;
  long grid_zeta = 0;
};

// Discriminant-sign classification over a (delta, zeta) grid. The cusp is
// the bistable grid point of minimal |zeta| (ties broken toward small
// |delta|); the boundary collects bistable points with a monostable
// neighbor. Output is independent of worker partitioning.
inline BistabilityScan bistability_boundary(double delta_min, double delta_max,
                                            double zeta_min, double zeta_max,
                                            long resolution_delta,
                                            long resolution_zeta,
                                            unsigned threads = 1) {
  if (resolution_delta < 2 || resolution_zeta < 2)
    throw std::invalid_argument(
        "bistability_boundary: resolution must be at least 2 per axis");

  BistabilityScan scan;
  scan.grid_delta = resolution_delta;
  scan.grid_zeta = resolution_zeta;
  const double ddelta = (delta_max - delta_min) / (resolution_delta - 1);
  const double dzeta = (zeta_max - zeta_min) / (resolution_zeta - 1);
  auto delta_at = [&](long i) { return delta_min + i * ddelta; };
  auto zeta_at = [&](long j) { return zeta_min + j * dzeta; };

  std::vector<unsigned char> bist(
      static_cast<size_t>(resolution_delta) * resolution_zeta, 0);
  auto classify_rows = [&](long j0, long j1) {
    for (long j = j0; j < j1; ++j)
      for (long i = 0; i < resolution_delta; ++i)
        bist[static_cast<size_t>(j) * resolution_delta + i] =
            is_bistable(delta_at(i), zeta_at(j)) ? 1 : 0;
  };
  const unsigned nw = std::max(1u, threads);
  if (nw == 1) {
    classify_rows(0, resolution_zeta);
  } else {
    std::vector<std::thread> workers;
    const long chunk = (resolution_zeta + nw - 1) / nw;
    for (unsigned w = 0; w < nw; ++w) {
      const long j0 = std::min<long>(w * chunk, resolution_zeta);
      const long j1 = std::min<long>(j0 + chunk, resolution_zeta);
      if (j0 < j1) workers.emplace_back(classify_rows, j0, j1);
    }
    for (auto& t : workers) t.join();
  }

  auto at = [&](long i, long j) -> bool {
    return bist[static_cast<size_t>(j) * resolution_delta + i] != 0;
  };
  std::optional<std::pair<double, double>> cusp;
  for (long j = 0; j < resolution_zeta; ++j)
    for (long i = 0; i < resolution_delta; ++i) {
      if (!at(i, j)) continue;
      ++scan.bistable_count;
      const double d = delta_at(i);
      const double z = zeta_at(j);
      const bool edge = (i > 0 && !at(i - 1, j)) ||
                        (i + 1 < resolution_delta && !at(i + 1, j)) ||
                        (j > 0 && !at(i, j - 1)) ||
                        (j + 1 < resolution_zeta && !at(i, j + 1));
      if (edge) scan.boundary.emplace_back(d, z);
      if (!cusp || std::abs(z) < std::abs(cusp->second) ||
          (std::abs(z) == std::abs(cusp->second) &&
           std::abs(d) < std::abs(cusp->first)))
        cusp = {d, z};
    }
  scan.cusp = cusp;
  return scan;
}

enum class BranchPolicy { LowBranch, HighBranch, Error };

inline PumpOperatingPoint select_branch(
    const std::vector<PumpOperatingPoint>& points, BranchPolicy policy) {
  if (points.empty())
    throw std::invalid_argument("select_branch: empty operating point list");
  if (policy == BranchPolicy::Error && points.size() >= 3) {
    std::ostringstream os;
    os << "select_branch: bistable operating point, stable roots n_low = "
       << points.front().n << " and n_high = " << points.back().n
       << " coexist; choose a branch policy";
    throw bistability_error(points.front().n, points.back().n, os.str());
  }
  std::vector<PumpOperatingPoint> stable;
  for (const auto& p : points)
    if (p.stability == Stability::Stable) stable.push_back(p);
  if (stable.empty()) {
    std::ostringstream os;
    os << "select_branch: no stable root at delta = " << points.front().delta
       << ", zeta = " << points.front().zeta
       << " (past the parametric oscillation threshold)";
    throw threshold_error(os.str());
  }
  return policy == BranchPolicy::HighBranch ? stable.back() : stable.front();
}

}  // namespace paramp
