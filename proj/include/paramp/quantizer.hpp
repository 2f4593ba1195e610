#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "paramp/errors.hpp"
#include "paramp/model.hpp"

// Circuit quantization: node capacitance and inverse-inductance matrices,
// the symmetric-definite generalized eigenproblem Linv Psi = w^2 C Psi,
// and reduction of one mode to an effective LC oscillator.

namespace paramp {

struct CircuitMatrices {
  Eigen::MatrixXd cap;      // farad
  Eigen::MatrixXd inv_ind;  // 1/henry
  long node_count = 0;
  std::vector<std::string> node_labels;

  // Largest |i-j| with a structurally nonzero entry in either matrix.
  long bandwidth() const {
    long b = 0;
    for (long i = 0; i < node_count; ++i)
      for (long j = 0; j < i; ++j)
        if (cap(i, j) != 0.0 || inv_ind(i, j) != 0.0)
          b = std::max(b, i - j);
    return b;
  }
};

struct ModeSet {
  Eigen::VectorXd frequencies;  // rad/s, ascending; zero modes report 0
  Eigen::MatrixXd shapes;       // columns, unit Euclidean norm
  std::vector<long> zero_modes;

  long count() const { return frequencies.size(); }
  bool is_zero_mode(long i) const {
    return std::find(zero_modes.begin(), zero_modes.end(), i) !=
           zero_modes.end();
  }
};

struct EffectiveOscillator {
  double c_eff = 0.0;      // F
  double l_eff = 0.0;      // H
  double omega_eff = 0.0;  // rad/s
  double z_eff = 0.0;      // ohm
  double kappa = 0.0;      // rad/s
  long mode_index = 0;
};

enum class EigenMethod { Auto, Dense, Banded };

namespace detail {

inline void add_branch_cap(Eigen::MatrixXd& cap, long i, long j, double c) {
  cap(i, i) += c;
  cap(j, j) += c;
  cap(i, j) -= c;
  cap(j, i) -= c;
}

inline void add_branch_ind(Eigen::MatrixXd& linv, long i, long j,
                           double inv_l) {
  linv(i, i) += inv_l;
  linv(j, j) += inv_l;
  linv(i, j) -= inv_l;
  linv(j, i) -= inv_l;
}

inline void require_positive_elements(const Architecture& arch) {
  ValidationReport rep = validate(arch, Environment{DirectKappa{1.0}, 50.0},
                                  Drive{1.0, 0.0, PhotonFlux{0.0}});
  std::string bad;
  for (const auto& it : rep.failures())
    if (it.field.rfind("architecture", 0) == 0)
      bad += (bad.empty() ? "" : "; ") + it.field + ": " + it.message;
  if (!bad.empty()) throw config_error("build_matrices: " + bad);
}

}  // namespace detail

// Node-flux matrices for each architecture. Chains keep every node flux;
// no boundary node is eliminated.
inline CircuitMatrices build_matrices(const Architecture& arch) {
  detail::require_positive_elements(arch);

  struct V {
    CircuitMatrices operator()(const SingleJunction& a) {
      CircuitMatrices m;
      m.node_count = 1;
      m.cap = Eigen::MatrixXd::Constant(1, 1, a.junction.capacitance());
      m.inv_ind =
          Eigen::MatrixXd::Constant(1, 1, 1.0 / a.junction.inductance());
      m.node_labels = {"n0"};
      return m;
    }

    CircuitMatrices operator()(const SeriesArray& a) {
      const long nodes = a.n + 1;
      const double cj = a.junction.capacitance();
      const double inv_l = 1.0 / a.junction.inductance();
      CircuitMatrices m;
      m.node_count = nodes;
      m.cap = Eigen::MatrixXd::Zero(nodes, nodes);
      m.inv_ind = Eigen::MatrixXd::Zero(nodes, nodes);
      for (long k = 0; k < a.n; ++k) {
        detail::add_branch_cap(m.cap, k, k + 1, cj);
        detail::add_branch_ind(m.inv_ind, k, k + 1, inv_l);
      }
      for (long k = 0; k + 1 < nodes; ++k) m.cap(k, k) += a.c_ground;
      m.cap(nodes - 1, nodes - 1) += a.c_out;
      m.node_labels.reserve(nodes);
      for (long k = 0; k < nodes; ++k)
        m.node_labels.push_back("n" + std::to_string(k));
      return m;
    }

    CircuitMatrices operator()(const Blochnium& a) {
      // One Quarton cell per chain link: M slave junctions in series
      // shunted by the primary SQUID (E_Jm = alpha_c/M * E_Js), so the
      // cell inverse inductance is (1 + alpha_c)/(M L_Js) and the cell
      // series capacitance is C_Js/M.
      const long nodes = a.n_quartons + 1;
      const double l_js = a.slave_junction.inductance();
      const double inv_l_cell =
          (1.0 + a.alpha_c) / (static_cast<double>(a.m_slaves) * l_js);
      const double c_cell =
          a.slave_junction.capacitance() / static_cast<double>(a.m_slaves);
      CircuitMatrices m;
      m.node_count = nodes;
      m.cap = Eigen::MatrixXd::Zero(nodes, nodes);
      m.inv_ind = Eigen::MatrixXd::Zero(nodes, nodes);
      for (long k = 0; k + 1 < nodes; ++k) {
        detail::add_branch_cap(m.cap, k, k + 1, c_cell);
        detail::add_branch_ind(m.inv_ind, k, k + 1, inv_l_cell);
      }
      for (long k = 0; k < nodes; ++k) m.cap(k, k) += a.c_ground;
      m.node_labels.reserve(nodes);
      for (long k = 0; k < nodes; ++k)
        m.node_labels.push_back("q" + std::to_string(k));
      return m;
    }

    CircuitMatrices operator()(const ModifiedBjpa& a) {
      // 9-node unit cell: two 4-junction chains joined at a grounded
      // center node, C_m/L_jm bridges from both corners to the center,
      // C_1+C_2+C_s and L_s loading the center. Cells cascade sharing
      // corner nodes, whose entries add.
      const long nodes = 8 * a.n_cells + 1;
      CircuitMatrices m;
      m.node_count = nodes;
      m.cap = Eigen::MatrixXd::Zero(nodes, nodes);
      m.inv_ind = Eigen::MatrixXd::Zero(nodes, nodes);
      for (long cell = 0; cell < a.n_cells; ++cell) {
        const long base = 8 * cell;
        for (long k = 0; k < 8; ++k) {
          detail::add_branch_cap(m.cap, base + k, base + k + 1, a.c_j);
          detail::add_branch_ind(m.inv_ind, base + k, base + k + 1,
                                 1.0 / a.l_js);
        }
        detail::add_branch_cap(m.cap, base, base + 4, a.c_m);
        detail::add_branch_cap(m.cap, base + 4, base + 8, a.c_m);
        detail::add_branch_ind(m.inv_ind, base, base + 4, 1.0 / a.l_jm);
        detail::add_branch_ind(m.inv_ind, base + 4, base + 8, 1.0 / a.l_jm);
        for (long k = 0; k <= 8; ++k) {
          if (k == 4) continue;
          if (cell > 0 && k == 0) continue;  // shared corner already loaded
          m.cap(base + k, base + k) += a.c_g;
        }
        m.cap(base + 4, base + 4) += a.c_1 + a.c_2 + a.c_s;
        m.inv_ind(base + 4, base + 4) += 1.0 / a.l_s;
      }
      m.node_labels.reserve(nodes);
      for (long k = 0; k < nodes; ++k)
        m.node_labels.push_back("n" + std::to_string(k));
      return m;
    }
  };
  return std::visit(V{}, arch);
}

namespace detail {

// Relative threshold on omega^2 below which a mode counts as a rigid
// flux translation (zero mode).
inline constexpr double zero_mode_rel_tol = 1e-11;

inline ModeSet finish_modes(Eigen::VectorXd lambda, Eigen::MatrixXd vecs) {
  const long n = lambda.size();
  const double lmax = lambda.size() ? lambda.maxCoeff() : 0.0;
  ModeSet ms;
  ms.frequencies = Eigen::VectorXd::Zero(n);
  ms.shapes = std::move(vecs);
  for (long i = 0; i < n; ++i) {
    ms.shapes.col(i).normalize();
    const double l = lambda(i);
    if (l <= zero_mode_rel_tol * lmax) {
      ms.frequencies(i) = 0.0;
      ms.zero_modes.push_back(i);
    } else {
      ms.frequencies(i) = std::sqrt(l);
    }
  }
  return ms;
}

inline ModeSet solve_modes_dense(const CircuitMatrices& m) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(m.inv_ind, m.cap,
             Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diag(m.cap,
                                                        Eigen::EigenvaluesOnly);
    double cmin = diag.info() == Eigen::Success
                      ? diag.eigenvalues().minCoeff()
                      : std::nan("");
    throw numerical_error(
        "solve_modes: capacitance matrix is not numerically positive "
        "definite; smallest eigenvalue " +
        std::to_string(cmin) + " F");
  }
  return finish_modes(es.eigenvalues(), es.eigenvectors());
}

inline ModeSet solve_modes_banded(const CircuitMatrices& m) {
  const lapack_int n = static_cast<lapack_int>(m.node_count);
  const lapack_int kb = static_cast<lapack_int>(m.bandwidth());
  const lapack_int ldab = kb + 1;
  // Lower band storage, column major: AB(i-j, j) = A(i,j), j <= i <= j+kb.
  std::vector<double> ab(static_cast<size_t>(ldab) * n, 0.0);
  std::vector<double> bb(static_cast<size_t>(ldab) * n, 0.0);
  for (lapack_int j = 0; j < n; ++j)
    for (lapack_int i = j; i <= std::min<lapack_int>(n - 1, j + kb); ++i) {
      ab[static_cast<size_t>(i - j) + static_cast<size_t>(j) * ldab] =
          m.inv_ind(i, j);
      bb[static_cast<size_t>(i - j) + static_cast<size_t>(j) * ldab] =
          m.cap(i, j);
    }
  std::vector<double> w(n, 0.0);
  std::vector<double> z(static_cast<size_t>(n) * n, 0.0);
  const lapack_int info = LAPACKE_dsbgvd(
      LAPACK_COL_MAJOR, 'V', 'L', n, kb, kb, ab.data(), ldab, bb.data(), ldab,
      w.data(), z.data(), n);
  if (info != 0) {
    if (info > n)
      throw numerical_error(
          "solve_modes: capacitance matrix is not positive definite "
          "(split Cholesky failed at leading minor " +
          std::to_string(info - n) + ")");
    throw numerical_error("solve_modes: banded eigensolver failed, info " +
                          std::to_string(info));
  }
  Eigen::VectorXd lambda = Eigen::Map<Eigen::VectorXd>(w.data(), n);
  Eigen::MatrixXd vecs = Eigen::Map<Eigen::MatrixXd>(z.data(), n, n);
  return finish_modes(std::move(lambda), std::move(vecs));
}

}  // namespace detail

// All modes of Linv Psi = w^2 C Psi, ascending. Auto picks the banded
// solver for large narrow-band chains and the dense solver otherwise;
// both are exposed for cross-checking.
inline ModeSet solve_modes(const CircuitMatrices& m,
                           EigenMethod method = EigenMethod::Auto) {
  if (m.node_count < 1)
    throw std::invalid_argument("solve_modes: empty matrices");
  switch (method) {
    case EigenMethod::Dense:
      return detail::solve_modes_dense(m);
    case EigenMethod::Banded:
      return detail::solve_modes_banded(m);
    case EigenMethod::Auto:
    default:
      if (m.node_count > 64 && m.bandwidth() <= 8 && m.bandwidth() >= 1)
        return detail::solve_modes_banded(m);
      return detail::solve_modes_dense(m);
  }
}

// || Linv psi - w^2 C psi || / (||Linv|| ||psi||), infinity norms.
// Scaled defect of the generalized eigenproblem for mode i. Pass the
// precomputed matrix bandwidth when checking many modes of a large
// circuit; the band scan itself costs a full matrix sweep.
inline double eigen_residual(const CircuitMatrices& m, const ModeSet& modes,
                             long i, long bandwidth_hint = -1) {
  const Eigen::VectorXd psi = modes.shapes.col(i);
  const double w2 = modes.frequencies(i) * modes.frequencies(i);
  const long n = m.node_count;
  const long b = bandwidth_hint >= 0 ? bandwidth_hint : m.bandwidth();
  if (2 * b + 1 < n) {
    const double psi_inf = psi.cwiseAbs().maxCoeff();
    double worst = 0.0, row_norm = 0.0;
    for (long row = 0; row < n; ++row) {
      const long lo = std::max<long>(0, row - b);
      const long hi = std::min<long>(n - 1, row + b);
      double acc = 0.0, row_abs = 0.0;
      for (long col = lo; col <= hi; ++col) {
        acc += (m.inv_ind(row, col) - w2 * m.cap(row, col)) * psi(col);
        row_abs += std::abs(m.inv_ind(row, col));
      }
      worst = std::max(worst, std::abs(acc));
      row_norm = std::max(row_norm, row_abs);
    }
    return worst / (row_norm * psi_inf);
  }
  const Eigen::VectorXd r = m.inv_ind * psi - w2 * (m.cap * psi);
  const double denom =
      m.inv_ind.cwiseAbs().rowwise().sum().maxCoeff() *
      psi.cwiseAbs().maxCoeff();
  return r.cwiseAbs().maxCoeff() / denom;
}

// max_{i != j} |psi_i^T C psi_j| / sqrt((psi_i^T C psi_i)(psi_j^T C psi_j)).
inline double max_cap_cross_coupling(const CircuitMatrices& m,
                                     const ModeSet& modes) {
  const long n = m.node_count;
  const long b = m.bandwidth();
  Eigen::MatrixXd cs;
  if (2 * b + 1 < n) {
    cs.setZero(n, modes.shapes.cols());
    for (long row = 0; row < n; ++row) {
      const long lo = std::max<long>(0, row - b);
      const long hi = std::min<long>(n - 1, row + b);
      for (long col = lo; col <= hi; ++col)
        cs.row(row) += m.cap(row, col) * modes.shapes.row(col);
    }
  } else {
    cs = m.cap * modes.shapes;
  }
  const Eigen::MatrixXd gram = modes.shapes.transpose() * cs;
  double worst = 0.0;
  for (long i = 0; i < gram.rows(); ++i)
    for (long j = 0; j < i; ++j)
      worst = std::max(worst, std::abs(gram(i, j)) /
                                  std::sqrt(gram(i, i) * gram(j, j)));
  return worst;
}

inline EffectiveOscillator effective_params(const ModeSet& modes,
                                            const CircuitMatrices& m,
                                            long mode_index,
                                            const Environment& env) {
  if (mode_index < 0 || mode_index >= modes.count())
    throw std::invalid_argument("effective_params: mode_index " +
                                std::to_string(mode_index) + " out of range");
  if (modes.is_zero_mode(mode_index))
    throw std::invalid_argument(
        "effective_params: mode " + std::to_string(mode_index) +
        " is a zero mode (rigid flux translation); pick a finite mode");
  const Eigen::VectorXd psi = modes.shapes.col(mode_index);
  EffectiveOscillator osc;
  osc.mode_index = mode_index;
  osc.c_eff = psi.dot(m.cap * psi);
  osc.l_eff = 1.0 / psi.dot(m.inv_ind * psi);
  osc.omega_eff = modes.frequencies(mode_index);
  osc.z_eff = std::sqrt(osc.l_eff / osc.c_eff);
  struct K {
    double omega;
    double operator()(const DirectKappa& c) const { return c.kappa; }
    double operator()(const QualityFactor& c) const { return omega / c.q_eff; }
  };
  osc.kappa = std::visit(K{osc.omega_eff}, env.coupling);
  return osc;
}

// Impedance mismatch diagnostic only; not used by any gain formula.
inline double reflection_coefficient(double z_eff, double z_line) {
  return (z_eff - z_line) / (z_eff + z_line);
}

}  // namespace paramp
