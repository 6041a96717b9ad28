#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spectomo/channels.hpp"
#include "spectomo/ptm.hpp"
#include "spectomo/quadrature.hpp"
#include "spectomo/signal.hpp"
#include "spectomo/spectrum.hpp"

namespace spectomo {

/// CZ followed by the same Gaussian-distributed X over-rotation at every
/// repetition: the angle is drawn once per run, so the noise is correlated
/// across repetitions and the k-step evolution is not a k-th power.
struct GaussianCzParams {
  double sigma_degrees = 0.0;
  int max_index = 50;
  int quadrature_order = 100;
};

struct GaussianCzResult {
  SpectralSignal signal;
  double quadrature_error = 0.0;  // max |g - g'| against the doubled order
  bool converged = true;
};

namespace detail {

inline SpectralSignal gaussian_cz_signal_at_order(double sigma_rad, int max_index,
                                                  int order) {
  const OperatorBasis basis = pauli_basis(2);
  const Eigen::Matrix4cd cz = cz_gate();
  const QuadratureRule rule = gauss_hermite(order);
  const double norm = 1.0 / std::sqrt(M_PI);

  SpectralSignal sig;
  sig.n_qubits = 2;
  sig.values = Eigen::VectorXd::Zero(max_index + 1);
  for (int q = 0; q < order; ++q) {
    // Change of variables phi = sqrt(2) sigma x maps the Gaussian average
    // onto the exp(-x^2) weight.
    const double phi = std::sqrt(2.0) * sigma_rad * rule.nodes[q];
    const Eigen::Matrix2cd rx = rx_gate(phi);
    Eigen::Matrix4cd rot = Eigen::Matrix4cd::Zero();
    rot.block<2, 2>(0, 0) = rx;
    rot.block<2, 2>(2, 2) = rx;
    const Eigen::Matrix4cd u = rot * cz;
    const PauliTransferMatrix ptm = ptm_from_kraus({u}, basis);
    // The traceless block of a unitary channel is orthogonal, hence normal:
    // its power trace is an exact eigenvalue power sum.
    Eigen::EigenSolver<Eigen::MatrixXd> es(ptm.traceless_block(), false);
    const Eigen::VectorXcd lam = es.eigenvalues();
    Eigen::VectorXcd powers = Eigen::VectorXcd::Ones(lam.size());
    const double w = norm * rule.weights[q];
    for (int k = 0; k <= max_index; ++k) {
      sig.values[k] += w * powers.sum().real();
      powers = powers.cwiseProduct(lam);
    }
  }
  return sig;
}

}  // namespace detail

/// Gaussian-correlated CZ signal g(k) = E_phi Tr[T(phi)^k], where T(phi) is
/// the traceless block of Rx(phi) CZ, evaluated by Gauss-Hermite quadrature.
/// The rule is re-evaluated at doubled order; disagreement beyond 1e-6 is
/// reported as non-convergence.
inline GaussianCzResult gaussian_cz_signal(const GaussianCzParams& params) {
  if (params.sigma_degrees < 0.0)
    throw std::invalid_argument("gaussian_cz_signal: sigma must be nonnegative");
  if (params.quadrature_order < 16)
    throw std::invalid_argument("gaussian_cz_signal: quadrature order must be >= 16");
  const double sigma = params.sigma_degrees * M_PI / 180.0;
  GaussianCzResult result;
  result.signal = detail::gaussian_cz_signal_at_order(sigma, params.max_index,
                                                      params.quadrature_order);
  const SpectralSignal check = detail::gaussian_cz_signal_at_order(
      sigma, params.max_index, 2 * params.quadrature_order);
  result.quadrature_error =
      (result.signal.values - check.values).cwiseAbs().maxCoeff();
  result.converged = result.quadrature_error <= 1e-6;
  return result;
}

/// Two-level atom exchanging energy with a coherent field: excitation
/// probability minus 1/2 sampled on the grid t = k Omega dt,
///   g(k) = (1/2) sum_n p_nbar(n) cos(k omega_dt sqrt(n + 1)),
/// with the Poisson sum truncated once its tail drops below 1e-12.
struct RevivalParams {
  double nbar = 5.0;
  double omega_dt = 0.05;
  int max_index = 900;
};

inline SpectralSignal revival_signal(const RevivalParams& params) {
  if (params.nbar < 0.0)
    throw std::invalid_argument("revival_signal: nbar must be nonnegative");
  if (params.max_index < 1)
    throw std::invalid_argument("revival_signal: K must be >= 1");

  std::vector<double> weights;
  double p = std::exp(-params.nbar);
  double cumulative = 0.0;
  int n = 0;
  while (cumulative < 1.0 - 1e-12 && n < 4000) {
    weights.push_back(p);
    cumulative += p;
    ++n;
    p *= params.nbar / n;
  }

  SpectralSignal sig;
  sig.n_qubits = 1;
  sig.values.resize(params.max_index + 1);
  for (int k = 0; k <= params.max_index; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < weights.size(); ++m)
      acc += weights[m] *
             std::cos(k * params.omega_dt * std::sqrt(static_cast<double>(m) + 1.0));
    sig.values[k] = acc / 2.0;
  }
  return sig;
}

/// Frame mismatch accumulation: the i-th repetition applies the gate
/// conjugated into a frame that has drifted by V^i. The k-th data point
/// probes
///   S_k = (V^dag)^{k+1} (V S_0)^k,
/// so k = 0 probes the transfer matrix of V^dag alone and one boundary
/// V^dag always remains on the measurement side. That boundary factor acts
/// like a SPAM rotation: it shifts amplitudes, never the fitted
/// eigenvalues, so a V commuting with S_0 leaves the extracted spectrum
/// exactly at the plain repeated-gate values.
struct FrameMismatchParams {
  PauliTransferMatrix base_gate;      // S_0
  Eigen::MatrixXcd mismatch_unitary;  // V
  int max_index = 50;
};

inline SpectralSignal frame_mismatch_signal(const FrameMismatchParams& params) {
  const Eigen::MatrixXcd& v = params.mismatch_unitary;
  if (v.rows() != params.base_gate.dim || v.cols() != params.base_gate.dim)
    throw std::invalid_argument("frame_mismatch_signal: dimension mismatch");
  if ((v.adjoint() * v - Eigen::MatrixXcd::Identity(v.rows(), v.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::invalid_argument("frame_mismatch_signal: V is not unitary");

  const PauliTransferMatrix ptm_v = unitary_channel(v);
  const PauliTransferMatrix ptm_vdag = unitary_channel(v.adjoint());
  const PauliTransferMatrix step = ptm_compose(ptm_v, params.base_gate);

  SpectralSignal sig;
  sig.n_qubits = params.base_gate.dim == 4 ? 2 : (params.base_gate.dim == 8 ? 3 : 1);
  sig.values.resize(params.max_index + 1);

  Eigen::MatrixXd undo = ptm_vdag.matrix;             // (V^dag)^{k+1}
  Eigen::MatrixXd forward = Eigen::MatrixXd::Identity(  // (V S_0)^k
      step.matrix.rows(), step.matrix.cols());
  const Eigen::Index n = step.matrix.rows() - 1;
  for (int k = 0; k <= params.max_index; ++k) {
    const Eigen::MatrixXd total = undo * forward;
    sig.values[k] = total.bottomRightCorner(n, n).trace();
    if (k < params.max_index) {
      undo = undo * ptm_vdag.matrix;
      forward = step.matrix * forward;
    }
  }
  return sig;
}

}  // namespace spectomo
